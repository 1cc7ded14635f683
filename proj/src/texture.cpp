#include "toporad/texture.hpp"

#include <cmath>

#include "toporad/error.hpp"

namespace toporad {

const std::vector<std::pair<int, int>>& default_glcm_offsets() {
    static const std::vector<std::pair<int, int>> offsets = {{0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};
    return offsets;
}

Glcm compute_glcm(const GrayImage& patch, int levels,
                  const std::vector<std::pair<int, int>>& offsets) {
    if (levels < 2) throw Error("GLCM needs at least 2 levels");
    if (offsets.empty()) throw Error("GLCM needs at least one offset");
    for (auto [dr, dc] : offsets) {
        if (dr == 0 && dc == 0) throw Error("GLCM offset must be nonzero");
        if (std::abs(dr) >= patch.height || std::abs(dc) >= patch.width)
            throw Error("patch too small for offset (" + std::to_string(dr) + "," +
                        std::to_string(dc) + ")");
    }

    // uniform quantization against the declared maxval
    std::vector<int> bins(patch.pixel_count());
    for (size_t i = 0; i < patch.pixel_count(); ++i) {
        long b = static_cast<long>(patch.values[i]) * levels / (patch.maxval + 1);
        bins[i] = static_cast<int>(std::min<long>(b, levels - 1));
    }

    Glcm glcm;
    glcm.levels = levels;
    glcm.offsets_used = offsets;
    std::vector<double> counts(static_cast<size_t>(levels) * levels, 0.0);
    double total = 0;
    for (auto [dr, dc] : offsets) {
        for (int r = 0; r < patch.height; ++r) {
            int r2 = r + dr;
            if (r2 < 0 || r2 >= patch.height) continue;
            for (int c = 0; c < patch.width; ++c) {
                int c2 = c + dc;
                if (c2 < 0 || c2 >= patch.width) continue;
                int i = bins[static_cast<size_t>(r) * patch.width + c];
                int j = bins[static_cast<size_t>(r2) * patch.width + c2];
                counts[static_cast<size_t>(i) * levels + j] += 1;
                counts[static_cast<size_t>(j) * levels + i] += 1;
                total += 2;
            }
        }
    }
    if (total == 0) throw Error("patch too small for any offset");
    glcm.probabilities.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) glcm.probabilities[i] = counts[i] / total;
    return glcm;
}

TextureFeatures haralick_features(const Glcm& glcm) {
    const int levels = glcm.levels;
    double mean_i = 0, mean_j = 0;
    for (int i = 0; i < levels; ++i) {
        for (int j = 0; j < levels; ++j) {
            mean_i += i * glcm.at(i, j);
            mean_j += j * glcm.at(i, j);
        }
    }
    double var_i = 0, var_j = 0;
    double contrast = 0, homogeneity = 0, second_moment = 0, cross = 0;
    for (int i = 0; i < levels; ++i) {
        for (int j = 0; j < levels; ++j) {
            double p = glcm.at(i, j);
            double d = static_cast<double>(i - j);
            contrast += d * d * p;
            homogeneity += p / (1.0 + d * d);
            second_moment += p * p;
            var_i += (i - mean_i) * (i - mean_i) * p;
            var_j += (j - mean_j) * (j - mean_j) * p;
            cross += (i - mean_i) * (j - mean_j) * p;
        }
    }
    TextureFeatures features;
    features.contrast = contrast;
    features.homogeneity = homogeneity;
    features.energy = std::sqrt(second_moment);
    double sigma = std::sqrt(var_i) * std::sqrt(var_j);
    features.correlation = sigma < 1e-12 ? 1.0 : cross / sigma;
    return features;
}

} // namespace toporad
