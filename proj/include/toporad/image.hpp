#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "toporad/error.hpp"

namespace toporad {

enum class TissueLabel { healthy = 0, pathologic = 1 };

inline const char* to_string(TissueLabel label) {
    return label == TissueLabel::pathologic ? "pathologic" : "healthy";
}

TissueLabel label_from_string(const std::string& s);

/// 2D grayscale raster, row-major, intensities in [0, maxval].
/// maxval is the declared intensity ceiling of the source file; it anchors
/// texture quantization so features stay comparable across patches of the
/// same slice. When constructed in code without an explicit ceiling it
/// defaults to the largest value present (at least 1).
struct GrayImage {
    int width = 0;
    int height = 0;
    int maxval = 1;
    std::vector<uint16_t> values;

    GrayImage() = default;
    GrayImage(int w, int h, std::vector<uint16_t> v, int declared_maxval = 0);

    uint16_t at(int r, int c) const { return values[static_cast<size_t>(r) * width + c]; }
    uint16_t& at(int r, int c) { return values[static_cast<size_t>(r) * width + c]; }
    size_t pixel_count() const { return values.size(); }
};

/// Boolean region-of-interest mask with a tissue label.
struct RoiMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> membership;
    TissueLabel label = TissueLabel::healthy;

    bool at(int r, int c) const { return membership[static_cast<size_t>(r) * width + c] != 0; }
    long member_count() const {
        return std::count_if(membership.begin(), membership.end(), [](uint8_t m) { return m != 0; });
    }
};

/// Square window cut from an image, labeled by the mask it came from.
struct Patch {
    int row = 0;
    int col = 0;
    int size = 0;
    GrayImage pixels;
    TissueLabel label = TissueLabel::healthy;
    std::string source_id;
};

struct Point2 {
    double x = 0;
    double y = 0;
};

struct PointCloud2D {
    std::vector<Point2> points;

    bool empty() const { return points.empty(); }
    size_t size() const { return points.size(); }
};

} // namespace toporad
