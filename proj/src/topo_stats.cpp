#include "toporad/topo_stats.hpp"

#include <cmath>

#include "toporad/complex.hpp"
#include "toporad/error.hpp"

namespace toporad {

long euler_characteristic(const Barcode& barcode, EulerMode mode) {
    long h0 = 0, h1 = 0;
    for (const Interval& interval : barcode.intervals) {
        if (mode == EulerMode::persistent_only && !interval.unbounded()) continue;
        (interval.dim == 0 ? h0 : h1) += 1;
    }
    return h0 - h1;
}

double persistent_entropy(const Barcode& barcode, int dim) {
    const double m = barcode.t_max + 1.0; // truncation for unbounded deaths
    std::vector<double> lengths;
    double total = 0;
    for (const Interval& interval : barcode.intervals) {
        if (interval.dim != dim) continue;
        double death = interval.unbounded() ? m : interval.death;
        double len = death - interval.birth;
        if (len <= 0) continue;
        lengths.push_back(len);
        total += len;
    }
    if (lengths.empty() || total <= 0) return 0;
    double entropy = 0;
    for (double len : lengths) {
        double p = len / total;
        entropy -= p * std::log10(p);
    }
    return entropy;
}

double generator_entropy(const Barcode& barcode) {
    std::vector<double> counts;
    double total = 0;
    for (const Interval& interval : barcode.intervals) {
        if (interval.dim != 1) continue;
        if (interval.generator.empty())
            throw Error("H1 interval with an empty generator (upstream defect)");
        double n = static_cast<double>(interval.generator.size());
        counts.push_back(n);
        total += n;
    }
    if (counts.empty()) return 0;
    double entropy = 0;
    for (double n : counts) {
        double p = n / total;
        entropy -= p * std::log10(p);
    }
    return entropy;
}

TopoFeatures topo_feature_vector(const GrayImage& patch) {
    Barcode barcode = compute_persistence(lower_star_filtration(patch));
    TopoFeatures features;
    features.euler = euler_characteristic(barcode, EulerMode::all_intervals);
    features.pe_h0 = persistent_entropy(barcode, 0);
    features.pe_h1 = persistent_entropy(barcode, 1);
    features.hgen = generator_entropy(barcode);
    return features;
}

} // namespace toporad
