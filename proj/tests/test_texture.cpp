#include <doctest.h>

#include <cmath>

#include "toporad/rng.hpp"
#include "toporad/texture.hpp"
#include "test_util.hpp"

using namespace toporad;

namespace {

Glcm glcm_from(std::vector<double> probabilities, int levels) {
    Glcm glcm;
    glcm.levels = levels;
    glcm.probabilities = std::move(probabilities);
    return glcm;
}

} // namespace

TEST_CASE("glcm of the 2x2 alternating patch, horizontal offset") {
    GrayImage patch(2, 2, {0, 1, 0, 1});
    Glcm glcm = compute_glcm(patch, 2, {{0, 1}});
    CHECK(glcm.at(0, 0) == 0.0);
    CHECK(glcm.at(0, 1) == 0.5);
    CHECK(glcm.at(1, 0) == 0.5);
    CHECK(glcm.at(1, 1) == 0.0);
}

TEST_CASE("glcm of a constant patch concentrates on one diagonal cell") {
    GrayImage patch(4, 4, std::vector<uint16_t>(16, 9));
    Glcm glcm = compute_glcm(patch, 32);
    double diagonal = 0, total = 0;
    for (int i = 0; i < glcm.levels; ++i)
        for (int j = 0; j < glcm.levels; ++j) {
            total += glcm.at(i, j);
            if (i == j) diagonal += glcm.at(i, j);
        }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(diagonal == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("glcm symmetry and normalization on random patches") {
    Rng rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        GrayImage patch = test::random_image(rng, 8, 200);
        if (patch.width < 2 || patch.height < 2) continue;
        Glcm glcm = compute_glcm(patch, 8);
        double total = 0;
        for (int i = 0; i < glcm.levels; ++i) {
            for (int j = 0; j < glcm.levels; ++j) {
                CHECK(glcm.at(i, j) == glcm.at(j, i));
                CHECK(glcm.at(i, j) >= 0.0);
                total += glcm.at(i, j);
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("glcm quantization is anchored to the declared maxval") {
    // the same pixels under a wider declared range land in lower bins
    GrayImage narrow(2, 2, {0, 1, 0, 1}, 1);
    GrayImage wide(2, 2, {0, 1, 0, 1}, 255);
    Glcm narrow_glcm = compute_glcm(narrow, 2, {{0, 1}});
    Glcm wide_glcm = compute_glcm(wide, 2, {{0, 1}});
    CHECK(narrow_glcm.at(0, 1) == 0.5);
    CHECK(wide_glcm.at(0, 0) == 1.0);

    // strictly increasing relabeling that preserves bins leaves the GLCM unchanged
    GrayImage base(3, 3, {0, 3, 7, 7, 3, 0, 0, 3, 7}, 7);
    GrayImage relabeled(3, 3, {1, 3, 6, 6, 3, 1, 1, 3, 6}, 7);
    Glcm a = compute_glcm(base, 4);
    Glcm b = compute_glcm(relabeled, 4);
    CHECK(a.probabilities == b.probabilities);
}

TEST_CASE("glcm validation") {
    GrayImage patch(2, 2, {0, 1, 0, 1});
    CHECK_THROWS_AS(compute_glcm(patch, 1), Error);
    CHECK_THROWS_AS(compute_glcm(patch, 2, {{0, 0}}), Error);
    CHECK_THROWS_AS(compute_glcm(patch, 2, {{0, 5}}), Error);
}

TEST_CASE("haralick features: alternating, constant, uniform") {
    GrayImage patch(2, 2, {0, 1, 0, 1});
    TextureFeatures alternating = haralick_features(compute_glcm(patch, 2, {{0, 1}}));
    CHECK(alternating.contrast == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alternating.correlation == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(alternating.homogeneity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(alternating.energy == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    GrayImage constant(4, 4, std::vector<uint16_t>(16, 3));
    TextureFeatures flat = haralick_features(compute_glcm(constant, 32));
    CHECK(flat.contrast == 0.0);
    CHECK(flat.correlation == 1.0);
    CHECK(flat.homogeneity == 1.0);
    CHECK(flat.energy == 1.0);

    TextureFeatures uniform = haralick_features(glcm_from({0.25, 0.25, 0.25, 0.25}, 2));
    CHECK(uniform.contrast == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(uniform.correlation == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(uniform.homogeneity == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(uniform.energy == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("feature invariances and identities") {
    Rng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 3 + static_cast<int>(rng.uniform_int(6));
        std::vector<uint16_t> values(static_cast<size_t>(n) * n);
        for (auto& v : values) v = static_cast<uint16_t>(rng.uniform_int(64));
        GrayImage patch(n, n, values, 63);

        // transposition invariance under the symmetric 4-direction default
        std::vector<uint16_t> transposed(values.size());
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                transposed[static_cast<size_t>(c) * n + r] = values[static_cast<size_t>(r) * n + c];
        GrayImage patch_t(n, n, transposed, 63);
        TextureFeatures a = haralick_features(compute_glcm(patch, 8));
        TextureFeatures b = haralick_features(compute_glcm(patch_t, 8));
        CHECK(a.contrast == doctest::Approx(b.contrast).epsilon(1e-12));
        CHECK(a.correlation == doctest::Approx(b.correlation).epsilon(1e-12));
        CHECK(a.homogeneity == doctest::Approx(b.homogeneity).epsilon(1e-12));
        CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-12));

        // contrast vanishes iff the matrix is diagonal
        Glcm glcm = compute_glcm(patch, 8);
        double off_diagonal = 0;
        for (int i = 0; i < glcm.levels; ++i)
            for (int j = 0; j < glcm.levels; ++j)
                if (i != j) off_diagonal += glcm.at(i, j);
        CHECK((a.contrast == 0.0) == (off_diagonal == 0.0));
        CHECK(a.energy <= 1.0 + 1e-12);
        CHECK(a.homogeneity <= 1.0 + 1e-12);
        CHECK(a.homogeneity > 0.0);
    }
}
