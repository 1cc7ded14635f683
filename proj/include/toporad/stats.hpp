#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace toporad {

struct WelchResult {
    double t = 0;
    double df = 0;
    double p = 1;
    double mean_a = 0, mean_b = 0;
    double sd_a = 0, sd_b = 0; // sample (n-1) standard deviations
    bool degenerate = false;   // both samples constant and equal
};

/// Unequal-variance two-sample t-test, Welch-Satterthwaite df, two-tailed
/// p from the Student-t distribution via the regularized incomplete beta.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct SpearmanResult {
    double rho = 0;
    double p = 1;
    bool degenerate = false; // a constant input; treated as insignificant
};

/// Rank correlation with average ranks for ties; p two-tailed via the
/// t-approximation with n-2 df, with |rho| = 1 mapping to p = 0.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

/// Exact two-tailed permutation p-value P(|rho_perm| >= |rho_observed|)
/// over all n! orderings; n <= 9 enforced.
double spearman_exact_p(std::span<const double> x, std::span<const double> y);

/// Average ranks (ties share their mean rank), 1-based.
std::vector<double> average_ranks(std::span<const double> values);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-tailed Student-t tail probability P(|T| >= |t|) with df degrees.
double student_t_two_tailed_p(double t, double df);

/// Per-feature mean and population (1/n) standard deviation fitted on
/// training rows; features with std < 1e-12 are flagged constant and map
/// to 0 when applied.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<uint8_t> constant;

    std::vector<double> apply(const std::vector<double>& row) const;
};

Standardizer standardize_fit(const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> standardize_apply(const Standardizer& standardizer,
                                                   const std::vector<std::vector<double>>& rows);

enum class DropReason { none = 0, insignificant = 1, redundant = 2 };
const char* to_string(DropReason reason);

struct FeatureSelection {
    std::string name;
    double rho = 0; // Spearman vs outcome
    double p = 1;
    bool kept = false;
    DropReason reason = DropReason::none;
};

struct SelectionReport {
    std::vector<FeatureSelection> features;
    double alpha_sig = 0.05;
    double redundancy_rho = 0.95;

    std::vector<uint8_t> kept_mask() const;
    size_t kept_count() const;
};

/// Spearman-vs-outcome screening at alpha_sig, then backward elimination of
/// redundant pairs (inter-feature |rho| > redundancy_rho drops the feature
/// with the weaker outcome correlation, ties resolved by column order).
/// Throws when every feature is dropped.
SelectionReport select_features(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels,
                                const std::vector<std::string>& names, double alpha_sig = 0.05,
                                double redundancy_rho = 0.95);

} // namespace toporad
