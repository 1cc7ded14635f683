#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "toporad/complex.hpp"
#include "toporad/format.hpp"
#include "toporad/persistence.hpp"
#include "toporad/rng.hpp"
#include "test_util.hpp"

using namespace toporad;

namespace {

GrayImage image_of(int w, int h, std::vector<uint16_t> values) {
    return GrayImage(w, h, std::move(values));
}

long count_dim(const FilteredComplex& complex, int dim) {
    return std::count_if(complex.simplices.begin(), complex.simplices.end(),
                         [dim](const Simplex& s) { return s.dim == dim; });
}

std::vector<double> distinct_values(const FilteredComplex& complex) {
    std::vector<double> values;
    for (const Simplex& s : complex.simplices) values.push_back(s.value);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

// the oracle-equivalence property the acceptance suite scales up
void check_against_oracle(const FilteredComplex& complex) {
    Barcode barcode = compute_persistence(complex);
    std::vector<double> values = distinct_values(complex);
    std::vector<long> beta0 = betti_curve(barcode, 0, values);
    std::vector<long> beta1 = betti_curve(barcode, 1, values);
    for (size_t i = 0; i < values.size(); ++i) {
        auto [b0, b1] = brute_force_betti(complex, values[i]);
        CHECK(beta0[i] == b0);
        CHECK(beta1[i] == b1);
    }
}

// a generator must be a closed walk: the edges of the cycle that lie in the
// sublevel complex at `t` and connect generator vertices must give every
// vertex even degree. We only check vertex-set validity: each generator
// vertex exists at `t` (its pixel value / point birth is <= t).
void check_generator_alive(const FilteredComplex& complex, const Interval& interval) {
    REQUIRE(interval.dim == 1);
    REQUIRE(!interval.generator.empty());
    double t = interval.unbounded() ? interval.birth : interval.death;
    std::map<uint32_t, double> vertex_value;
    for (const Simplex& s : complex.simplices)
        if (s.dim == 0) vertex_value[s.v[0]] = s.value;
    for (uint32_t v : interval.generator) {
        REQUIRE(vertex_value.count(v) == 1);
        CHECK(vertex_value[v] <= t);
    }
}

} // namespace

TEST_CASE("lower-star simplex counts") {
    FilteredComplex one = lower_star_filtration(image_of(1, 1, {3}));
    CHECK(count_dim(one, 0) == 1);
    CHECK(count_dim(one, 1) == 0);
    CHECK(count_dim(one, 2) == 0);

    FilteredComplex square = lower_star_filtration(image_of(2, 2, {0, 1, 2, 3}));
    CHECK(count_dim(square, 0) == 4);
    CHECK(count_dim(square, 1) == 5); // 4 sides + 1 diagonal
    CHECK(count_dim(square, 2) == 2);

    // Freudenthal counts by enumeration: E = h(w-1) + w(h-1) + (w-1)(h-1)
    FilteredComplex grid = lower_star_filtration(image_of(3, 3, std::vector<uint16_t>(9, 5)));
    CHECK(count_dim(grid, 0) == 9);
    CHECK(count_dim(grid, 1) == 16);
    CHECK(count_dim(grid, 2) == 8);
}

TEST_CASE("lower-star simplex values are vertex maxima") {
    FilteredComplex complex = lower_star_filtration(image_of(2, 2, {0, 7, 2, 3}));
    for (const Simplex& s : complex.simplices) {
        double expected = 0;
        std::vector<uint16_t> pixels = {0, 7, 2, 3};
        for (int i = 0; i <= s.dim; ++i) expected = std::max(expected, double(pixels[s.v[i]]));
        CHECK(s.value == expected);
    }
}

TEST_CASE("rips landmark complexes") {
    PointCloud2D single;
    single.points = {{1.0, 2.0}};
    FilteredComplex one = rips_filtration(single, 2.0);
    CHECK(one.size() == 1);

    PointCloud2D pair;
    pair.points = {{0.0, 0.0}, {1.0, 0.0}};
    FilteredComplex two = rips_filtration(pair, 2.0);
    CHECK(count_dim(two, 1) == 1);
    CHECK(two.simplices.back().value == 1.0);

    PointCloud2D corners;
    corners.points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    FilteredComplex square = rips_filtration(corners, 2.0);
    CHECK(count_dim(square, 0) == 4);
    CHECK(count_dim(square, 1) == 6);
    CHECK(count_dim(square, 2) == 4);
    long at_one = 0, at_sqrt2 = 0;
    for (const Simplex& s : square.simplices) {
        if (s.dim == 1 && s.value == 1.0) ++at_one;
        if (s.dim == 1 && s.value == std::sqrt(2.0)) ++at_sqrt2;
        if (s.dim == 2) CHECK(s.value == std::sqrt(2.0));
    }
    CHECK(at_one == 4);
    CHECK(at_sqrt2 == 2);
}

TEST_CASE("rips cap and validation") {
    Rng rng(3);
    PointCloud2D cloud = test::random_cloud(rng, 20, 1.0);
    CHECK_THROWS_AS(rips_filtration(cloud, 1.0, 5), SizeCapError);
    PointCloud2D empty;
    CHECK_THROWS_AS(rips_filtration(empty, 1.0), Error);
    CHECK_THROWS_AS(rips_filtration(cloud, 0.0), Error);
}

TEST_CASE("persistence of a constant image: one component, no loops") {
    Barcode barcode = compute_persistence(lower_star_filtration(image_of(3, 3, std::vector<uint16_t>(9, 5))));
    REQUIRE(barcode.count(0) == 1);
    CHECK(barcode.count(1) == 0);
    CHECK(barcode.intervals[0].birth == 5.0);
    CHECK(barcode.intervals[0].unbounded());
}

TEST_CASE("persistence of the ring image") {
    FilteredComplex complex =
        lower_star_filtration(image_of(3, 3, {1, 1, 1, 1, 9, 1, 1, 1, 1}));
    Barcode barcode = compute_persistence(complex);
    REQUIRE(barcode.count(0) == 1);
    REQUIRE(barcode.count(1) == 1);
    const Interval* loop = nullptr;
    for (const Interval& i : barcode.intervals)
        if (i.dim == 1) loop = &i;
    CHECK(loop->birth == 1.0);
    CHECK(loop->death == 9.0);
    // deterministic reduction picks the diagonal-shortcut cycle: six
    // vertices, all alive at t=1
    CHECK(loop->generator == std::vector<uint32_t>{0, 1, 3, 5, 7, 8});
    check_generator_alive(complex, *loop);

    // oracle agreement at the landmark thresholds
    CHECK(brute_force_betti(complex, 1.0) == std::pair<long, long>{1, 1});
    CHECK(brute_force_betti(complex, 9.0) == std::pair<long, long>{1, 0});
    CHECK(betti_curve(barcode, 0, {1.0}) == std::vector<long>{1});
    CHECK(betti_curve(barcode, 1, {1.0}) == std::vector<long>{1});
    CHECK(betti_curve(barcode, 1, {9.0}) == std::vector<long>{0});
}

TEST_CASE("persistence of the unit-square rips complex") {
    PointCloud2D corners;
    corners.points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    FilteredComplex complex = rips_filtration(corners, 2.0);
    Barcode barcode = compute_persistence(complex);
    REQUIRE(barcode.count(0) == 4);
    REQUIRE(barcode.count(1) == 1);
    long finite_h0 = 0;
    for (const Interval& i : barcode.intervals) {
        if (i.dim == 0 && !i.unbounded()) {
            CHECK(i.birth == 0.0);
            CHECK(i.death == 1.0);
            ++finite_h0;
        }
        if (i.dim == 1) {
            CHECK(i.birth == 1.0);
            CHECK(i.death == std::sqrt(2.0));
            CHECK(i.generator == std::vector<uint32_t>{0, 1, 2, 3});
        }
    }
    CHECK(finite_h0 == 3);
    CHECK(barcode.t_max == 2.0);
}

TEST_CASE("betti curve conventions") {
    Barcode empty;
    CHECK(betti_curve(empty, 0, {0.0, 1.0, 2.0}) == std::vector<long>{0, 0, 0});
    CHECK_THROWS_AS(betti_curve(empty, 0, {2.0, 1.0}), std::invalid_argument);

    Barcode barcode;
    barcode.t_max = 5;
    barcode.intervals.push_back({0, 1.0, 3.0, {}});
    barcode.intervals.push_back({0, 2.0, kUnbounded, {}});
    CHECK(betti_curve(barcode, 0, {0.5, 1.0, 2.5, 3.0, 100.0}) ==
          std::vector<long>{0, 1, 2, 1, 1});
}

TEST_CASE("brute-force oracle basics") {
    FilteredComplex constant = lower_star_filtration(image_of(2, 2, std::vector<uint16_t>(4, 7)));
    CHECK(brute_force_betti(constant, 7.0) == std::pair<long, long>{1, 0});
    CHECK(brute_force_betti(constant, 6.0) == std::pair<long, long>{0, 0});

    FilteredComplex two = lower_star_filtration(image_of(2, 1, {0, 0}));
    // both vertices below the edge threshold: two components
    FilteredComplex isolated = lower_star_filtration(image_of(3, 1, {0, 9, 0}));
    CHECK(brute_force_betti(isolated, 0.0) == std::pair<long, long>{2, 0});
    CHECK(brute_force_betti(two, 0.0) == std::pair<long, long>{1, 0});

    Rng rng(1);
    CHECK_THROWS_AS(brute_force_betti(lower_star_filtration(test::random_image(rng, 8, 5)), 1.0, 10),
                    SizeCapError);
}

TEST_CASE("oracle equivalence on random images and clouds") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        FilteredComplex complex = lower_star_filtration(test::random_image(rng, 7, 5));
        check_against_oracle(complex);
    }
    for (int trial = 0; trial < 20; ++trial) {
        PointCloud2D cloud = test::random_cloud(rng, 10, 1.5);
        check_against_oracle(rips_filtration(cloud, 2.0));
    }
}

TEST_CASE("intensity shift moves every endpoint by the same constant") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        GrayImage image = test::random_image(rng, 6, 5);
        std::vector<uint16_t> shifted_values = image.values;
        for (auto& v : shifted_values) v = static_cast<uint16_t>(v + 11);
        GrayImage shifted(image.width, image.height, shifted_values);
        Barcode a = compute_persistence(lower_star_filtration(image));
        Barcode b = compute_persistence(lower_star_filtration(shifted));
        REQUIRE(a.intervals.size() == b.intervals.size());
        for (size_t i = 0; i < a.intervals.size(); ++i) {
            CHECK(b.intervals[i].dim == a.intervals[i].dim);
            CHECK(b.intervals[i].birth == a.intervals[i].birth + 11);
            if (a.intervals[i].unbounded())
                CHECK(b.intervals[i].unbounded());
            else
                CHECK(b.intervals[i].death == a.intervals[i].death + 11);
            CHECK(b.intervals[i].generator == a.intervals[i].generator);
        }
    }
}

TEST_CASE("H1 generators are alive cycles with even degree at death time") {
    Rng rng(77);
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        FilteredComplex complex = lower_star_filtration(test::random_image(rng, 7, 4));
        Barcode barcode = compute_persistence(complex);
        for (const Interval& interval : barcode.intervals) {
            if (interval.dim != 1) continue;
            check_generator_alive(complex, interval);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("barcode is reproducible bit for bit") {
    Rng rng(99);
    GrayImage image = test::random_image(rng, 8, 6);
    Barcode a = compute_persistence(lower_star_filtration(image));
    Barcode b = compute_persistence(lower_star_filtration(image));
    REQUIRE(a.intervals.size() == b.intervals.size());
    for (size_t i = 0; i < a.intervals.size(); ++i) {
        CHECK(a.intervals[i].birth == b.intervals[i].birth);
        CHECK(a.intervals[i].death == b.intervals[i].death);
        CHECK(a.intervals[i].generator == b.intervals[i].generator);
    }
}

TEST_CASE("compute_persistence rejects an out-of-order complex") {
    FilteredComplex complex = lower_star_filtration(image_of(2, 2, {0, 1, 2, 3}));
    std::swap(complex.simplices.front(), complex.simplices.back());
    CHECK_THROWS_AS(compute_persistence(complex), std::logic_error);
}

TEST_CASE("barcode CSV round trip") {
    test::TempDir dir("barcode");
    PointCloud2D corners;
    corners.points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
    Barcode barcode = compute_persistence(rips_filtration(corners, 2.0));
    save_barcode_csv(barcode, dir.file("b.csv"));
    Barcode loaded = load_barcode_csv(dir.file("b.csv"));
    REQUIRE(loaded.intervals.size() == barcode.intervals.size());
    for (size_t i = 0; i < loaded.intervals.size(); ++i) {
        CHECK(loaded.intervals[i].dim == barcode.intervals[i].dim);
        CHECK(loaded.intervals[i].generator.size() == barcode.intervals[i].generator.size());
        if (barcode.intervals[i].unbounded()) CHECK(loaded.intervals[i].unbounded());
    }
    save_generators(barcode, dir.file("g.txt"));
    CHECK(read_text_file(dir.file("g.txt")).find("0 1 2 3") != std::string::npos);
}
