#pragma once

#include <utility>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

/// Symmetric grey-level co-occurrence matrix, normalized to sum 1.
struct Glcm {
    int levels = 0;
    std::vector<double> probabilities; // levels x levels, row-major
    std::vector<std::pair<int, int>> offsets_used;

    double at(int i, int j) const { return probabilities[static_cast<size_t>(i) * levels + j]; }
};

struct TextureFeatures {
    double contrast = 0;
    double correlation = 0;
    double homogeneity = 0;
    double energy = 0;
};

/// Distance-1 offsets at 0, 45, 90 and 135 degrees.
const std::vector<std::pair<int, int>>& default_glcm_offsets();

/// Intensities are quantized as floor(value * levels / (maxval + 1)) against
/// the image's declared maxval. Pair counts are symmetrized, summed across
/// offsets, then normalized.
Glcm compute_glcm(const GrayImage& patch, int levels = 32,
                  const std::vector<std::pair<int, int>>& offsets = default_glcm_offsets());

/// contrast = sum (i-j)^2 P; homogeneity = sum P/(1+(i-j)^2);
/// energy = sqrt(sum P^2); correlation via marginal means/stds, defined as
/// 1 when the marginal variance degenerates.
TextureFeatures haralick_features(const Glcm& glcm);

} // namespace toporad
