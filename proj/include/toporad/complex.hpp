#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

/// One simplex of dimension 0..2. Vertex ids are sorted ascending; unused
/// slots hold 0. The filtration value is the smallest t at which the
/// simplex is present.
struct Simplex {
    std::array<uint32_t, 3> v{0, 0, 0};
    uint8_t dim = 0;
    double value = 0;
};

/// Filtered simplicial complex with a deterministic total order:
/// simplices sorted by (value, dimension, lexicographic vertices).
/// Every face of a simplex appears earlier with value <= the simplex's.
struct FilteredComplex {
    uint32_t vertex_count = 0;
    double t_max = 0; // smallest t with K(t) == K
    std::vector<Simplex> simplices;

    size_t size() const { return simplices.size(); }
};

/// Sorts into the canonical order and checks the face invariants.
/// Throws std::logic_error on a violation.
void finalize_complex(FilteredComplex& complex);

/// Lower-star filtration of the image over the Freudenthal triangulation:
/// one vertex per pixel at its intensity, each unit square split by the
/// diagonal from its top-left to bottom-right corner, simplex value = max
/// of its vertex values.
FilteredComplex lower_star_filtration(const GrayImage& image);

/// Vietoris-Rips complex up to dimension 2: all vertices at value 0, an
/// edge per pair within t_max at the Euclidean distance, a triangle per
/// edge-complete triple at the largest pairwise distance. Throws
/// SizeCapError above max_points.
FilteredComplex rips_filtration(const PointCloud2D& cloud, double t_max,
                                size_t max_points = 5000);

} // namespace toporad
