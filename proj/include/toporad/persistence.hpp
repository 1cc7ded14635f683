#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "toporad/complex.hpp"

namespace toporad {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// One barcode interval [birth, death). death == kUnbounded for classes
/// still alive at t_max. H1 intervals carry the distinct vertex ids of a
/// representative cycle; H0 generators are empty.
struct Interval {
    int dim = 0;
    double birth = 0;
    double death = kUnbounded;
    std::vector<uint32_t> generator;

    bool unbounded() const { return death == kUnbounded; }
};

struct Barcode {
    std::vector<Interval> intervals;
    double t_max = 0;

    long count(int dim) const;
};

/// Persistence up to H1 by Z/2 boundary-matrix column reduction in the
/// complex's deterministic order, keeping the reduction-transformation
/// columns. Zero-persistence pairs are dropped. Finite H1 generators are
/// the reduced column of the killing triangle (the death-time cycle);
/// essential H1 generators are the transformation column of the creating
/// edge (present at birth).
Barcode compute_persistence(const FilteredComplex& complex);

/// Betti numbers along sorted thresholds: intervals with birth <= t < death
/// (unbounded intervals count for every t >= birth).
std::vector<long> betti_curve(const Barcode& barcode, int dim,
                              const std::vector<double>& thresholds);

/// Independent oracle: assembles the sublevel complex at t explicitly and
/// computes beta0 by union-find and beta1 = E - rank d1 - rank d2 by GF(2)
/// elimination. On planar image complexes this reduces to the Euler
/// relation beta1 = beta0 - (V - E + T); the rank term also covers Rips
/// complexes where filled tetrahedral shells make 2-cycles appear.
std::pair<long, long> brute_force_betti(const FilteredComplex& complex, double t,
                                        size_t max_simplices = 5000);

/// Barcode CSV: header dim,birth,death,generator_vertices with unbounded
/// deaths serialized as inf and the generator column holding the vertex
/// count. The optional generators file has one line per interval with
/// space-separated vertex ids.
void save_barcode_csv(const Barcode& barcode, const std::string& path);
void save_generators(const Barcode& barcode, const std::string& path);
Barcode load_barcode_csv(const std::string& path);

} // namespace toporad
