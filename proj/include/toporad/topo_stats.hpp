#pragma once

#include "toporad/image.hpp"
#include "toporad/persistence.hpp"

namespace toporad {

enum class EulerMode {
    all_intervals,   // every interval counts (default; matches reported magnitudes)
    persistent_only, // only classes alive at t_max
};

/// chi = #H0 intervals - #H1 intervals under the chosen counting mode.
long euler_characteristic(const Barcode& barcode, EulerMode mode = EulerMode::all_intervals);

/// Shannon entropy (base 10) of normalized interval lengths in one
/// dimension. Unbounded deaths are truncated to m = t_max + 1. Empty
/// restriction or zero total length gives 0.
double persistent_entropy(const Barcode& barcode, int dim);

/// Shannon entropy (base 10) of normalized distinct-vertex counts of the
/// H1 representative cycles. No H1 intervals gives 0; an H1 interval with
/// an empty generator is an upstream defect and throws.
double generator_entropy(const Barcode& barcode);

/// The four topological features of one patch.
struct TopoFeatures {
    long euler = 0;
    double pe_h0 = 0;
    double pe_h1 = 0;
    double hgen = 0;
};

/// lower-star filtration -> persistence -> (chi, PE H0, PE H1, GH).
TopoFeatures topo_feature_vector(const GrayImage& patch);

} // namespace toporad
