#include "toporad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toporad/error.hpp"

namespace toporad {

namespace {

constexpr double kConstantStd = 1e-12;

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// Lentz continued fraction for the incomplete beta (Numerical Recipes form).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iterations = 300;
    constexpr double eps = 3e-16;
    constexpr double tiny = 1e-300;
    double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1, d = 1 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0) || !(b > 0)) throw Error("incomplete beta requires positive parameters");
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
    if (!(df > 0)) throw Error("degrees of freedom must be positive");
    if (std::isinf(t)) return 0;
    double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error("Welch test needs at least 2 values per sample");
    for (double v : a)
        if (!std::isfinite(v)) throw Error("non-finite value in sample a");
    for (double v : b)
        if (!std::isfinite(v)) throw Error("non-finite value in sample b");

    WelchResult result;
    result.mean_a = mean_of(a);
    result.mean_b = mean_of(b);
    double var_a = sample_variance(a, result.mean_a);
    double var_b = sample_variance(b, result.mean_b);
    result.sd_a = std::sqrt(var_a);
    result.sd_b = std::sqrt(var_b);
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double sa = var_a / na, sb = var_b / nb;
    double denom = sa + sb;
    if (denom < 1e-300) {
        // both samples constant; undefined statistic by convention
        result.degenerate = true;
        result.df = na + nb - 2;
        if (result.mean_a == result.mean_b) {
            result.t = 0;
            result.p = 1;
        } else {
            result.t = result.mean_a > result.mean_b ? HUGE_VAL : -HUGE_VAL;
            result.p = 0;
        }
        return result;
    }
    result.t = (result.mean_a - result.mean_b) / std::sqrt(denom);
    result.df = denom * denom / (sa * sa / (na - 1) + sb * sb / (nb - 1));
    result.p = student_t_two_tailed_p(result.t, result.df);
    return result;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&values](size_t i, size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
    double mx = mean_of(x), my = mean_of(y);
    double sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx < 1e-300 || syy < 1e-300) return 0;
    return sxy / std::sqrt(sxx * syy);
}

bool is_constant(std::span<const double> v) {
    for (double x : v)
        if (x != v.front()) return false;
    return true;
}

} // namespace

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw Error("Spearman needs two equal-length samples of size >= 3");
    SpearmanResult result;
    if (is_constant(x) || is_constant(y)) {
        result.degenerate = true;
        result.rho = 0;
        result.p = 1;
        return result;
    }
    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    result.rho = pearson(rx, ry);
    double n = static_cast<double>(x.size());
    if (std::fabs(result.rho) >= 1.0 - 1e-14) {
        result.p = 0;
        return result;
    }
    double t = result.rho * std::sqrt((n - 2) / (1 - result.rho * result.rho));
    result.p = student_t_two_tailed_p(t, n - 2);
    return result;
}

double spearman_exact_p(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw Error("Spearman needs two equal-length samples of size >= 3");
    if (x.size() > 9) throw Error("exact permutation p is limited to n <= 9");
    if (is_constant(x) || is_constant(y)) throw Error("constant input: rho undefined");

    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    double observed = std::fabs(pearson(rx, ry));

    std::vector<double> permuted = ry;
    std::sort(permuted.begin(), permuted.end());
    long hits = 0, total = 0;
    do {
        ++total;
        if (std::fabs(pearson(rx, permuted)) >= observed - 1e-12) ++hits;
    } while (std::next_permutation(permuted.begin(), permuted.end()));
    // duplicate rank vectors repeat identically across the multiset
    // permutations, so the ratio is the exact permutation probability
    return static_cast<double>(hits) / static_cast<double>(total);
}

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    std::vector<double> out(row.size());
    for (size_t j = 0; j < row.size(); ++j)
        out[j] = constant[j] ? 0.0 : (row[j] - means[j]) / stds[j];
    return out;
}

Standardizer standardize_fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw Error("cannot fit a standardizer on an empty table");
    const size_t cols = rows.front().size();
    Standardizer s;
    s.means.assign(cols, 0.0);
    s.stds.assign(cols, 0.0);
    s.constant.assign(cols, 0);
    double n = static_cast<double>(rows.size());
    for (const auto& row : rows)
        for (size_t j = 0; j < cols; ++j) s.means[j] += row[j];
    for (size_t j = 0; j < cols; ++j) s.means[j] /= n;
    for (const auto& row : rows)
        for (size_t j = 0; j < cols; ++j)
            s.stds[j] += (row[j] - s.means[j]) * (row[j] - s.means[j]);
    for (size_t j = 0; j < cols; ++j) {
        s.stds[j] = std::sqrt(s.stds[j] / n); // population std
        if (s.stds[j] < kConstantStd) {
            s.constant[j] = 1;
            s.stds[j] = 1.0;
        }
    }
    return s;
}

std::vector<std::vector<double>> standardize_apply(const Standardizer& standardizer,
                                                   const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(standardizer.apply(row));
    return out;
}

const char* to_string(DropReason reason) {
    switch (reason) {
    case DropReason::none: return "none";
    case DropReason::insignificant: return "insignificant";
    default: return "redundant";
    }
}

std::vector<uint8_t> SelectionReport::kept_mask() const {
    std::vector<uint8_t> mask(features.size());
    for (size_t i = 0; i < features.size(); ++i) mask[i] = features[i].kept;
    return mask;
}

size_t SelectionReport::kept_count() const {
    return static_cast<size_t>(
        std::count_if(features.begin(), features.end(), [](const auto& f) { return f.kept; }));
}

SelectionReport select_features(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels,
                                const std::vector<std::string>& names, double alpha_sig,
                                double redundancy_rho) {
    if (rows.size() != labels.size()) throw Error("rows and labels differ in length");
    if (names.size() < 2) throw Error("feature selection needs at least 2 features");

    const size_t cols = names.size();
    std::vector<std::vector<double>> columns(cols, std::vector<double>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols; ++j) columns[j][i] = rows[i][j];
    std::vector<double> outcome(labels.begin(), labels.end());

    SelectionReport report;
    report.alpha_sig = alpha_sig;
    report.redundancy_rho = redundancy_rho;
    report.features.resize(cols);
    for (size_t j = 0; j < cols; ++j) {
        FeatureSelection& f = report.features[j];
        f.name = names[j];
        SpearmanResult s = spearman(columns[j], outcome);
        f.rho = s.rho;
        f.p = s.p;
        if (s.degenerate || s.p > alpha_sig) {
            f.kept = false;
            f.reason = DropReason::insignificant;
        } else {
            f.kept = true;
        }
    }

    // backward elimination: while some kept pair is near-duplicated, drop
    // the one with the weaker outcome correlation (later column on ties)
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t j = 0; j < cols && !changed; ++j) {
            if (!report.features[j].kept) continue;
            for (size_t k = j + 1; k < cols && !changed; ++k) {
                if (!report.features[k].kept) continue;
                SpearmanResult inter = spearman(columns[j], columns[k]);
                if (std::fabs(inter.rho) <= redundancy_rho) continue;
                size_t drop = std::fabs(report.features[j].rho) < std::fabs(report.features[k].rho)
                                  ? j
                                  : k;
                report.features[drop].kept = false;
                report.features[drop].reason = DropReason::redundant;
                changed = true;
            }
        }
    }

    if (report.kept_count() == 0) throw Error("feature selection dropped every feature");
    return report;
}

} // namespace toporad
