#pragma once

#include <stdexcept>
#include <string>

namespace toporad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File parsing / filesystem failures.
struct IoError : Error {
    using Error::Error;
};

// Mirrored ROI overlaps the original by more than the allowed fraction
// (midline-crossing lesion; caller must supply an explicit healthy mask).
struct MaskOverlapError : Error {
    using Error::Error;
};

// A patch extraction produced no windows at all.
struct NoPatchesError : Error {
    using Error::Error;
};

// Input exceeds a complexity guard (point-cloud cap, oracle simplex cap).
struct SizeCapError : Error {
    using Error::Error;
};

} // namespace toporad
