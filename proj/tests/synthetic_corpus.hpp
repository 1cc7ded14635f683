#pragma once

#include <algorithm>
#include <cmath>

#include "toporad/image.hpp"
#include "toporad/rng.hpp"

namespace toporad::test {

/// Lesion-like patch: a bright annulus on a darker ground plus noise.
inline GrayImage ring_patch(Rng& rng, int side = 30) {
    double cr = side / 2.0 + rng.uniform(-3.0, 3.0);
    double cc = side / 2.0 + rng.uniform(-3.0, 3.0);
    double inner = rng.uniform(3.5, 6.5);
    double outer = inner + rng.uniform(2.0, 4.0);
    double ground = rng.uniform(30.0, 70.0);
    double rim = rng.uniform(150.0, 210.0);
    double noise = rng.uniform(8.0, 18.0);
    std::vector<uint16_t> values(static_cast<size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            double d = std::sqrt((r - cr) * (r - cr) + (c - cc) * (c - cc));
            double v = (d >= inner && d <= outer) ? rim : ground;
            v += rng.normal(0, noise);
            values[static_cast<size_t>(r) * side + c] =
                static_cast<uint16_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return GrayImage(side, side, std::move(values), 255);
}

/// Healthy-like patch: a smooth intensity gradient plus noise.
inline GrayImage gradient_patch(Rng& rng, int side = 30) {
    double base = rng.uniform(40.0, 120.0);
    double slope_r = rng.uniform(-3.0, 3.0);
    double slope_c = rng.uniform(-3.0, 3.0);
    double noise = rng.uniform(8.0, 18.0);
    std::vector<uint16_t> values(static_cast<size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            double v = base + slope_r * r + slope_c * c + rng.normal(0, noise);
            values[static_cast<size_t>(r) * side + c] =
                static_cast<uint16_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return GrayImage(side, side, std::move(values), 255);
}

} // namespace toporad::test
