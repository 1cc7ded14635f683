#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "toporad/stats.hpp"
#include "toporad/table.hpp"

namespace toporad {

struct Hyper {
    double lambda = 1e-3;
    double learning_rate = 0.1;
    long max_epochs = 5000;
    double tolerance = 1e-8;
    uint64_t seed = 0;
};

/// Standardizer + selected-feature mask + logistic weights; serializable.
struct ClassifierModel {
    std::vector<std::string> feature_names;
    Standardizer standardizer;          // over all features in feature_names
    std::vector<uint8_t> selected;      // mask over feature_names
    std::vector<double> weights;        // one per selected feature
    double bias = 0;
    Hyper hyper;

    size_t selected_count() const;
};

struct Metrics {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double misclassification_rate = 0;
    double f1 = 0;
    double auc = 0;
    std::vector<std::pair<double, double>> roc;        // (fpr, tpr)
    std::vector<double> roc_thresholds;                // one per roc point
};

/// Seeded, stratified 70/30-style split; class proportions preserved within
/// one row via largest-remainder apportionment. group_by_source assigns
/// whole source_id groups to one side.
std::pair<FeatureTable, FeatureTable> split(const FeatureTable& table, double train_fraction,
                                            uint64_t seed, bool group_by_source = false);

/// Full-batch gradient descent on mean logistic loss + lambda*||w||^2/2,
/// zero initialization, learning-rate halving on loss increase. Rows must
/// already be standardized.
std::pair<std::vector<double>, double> train_logistic(const std::vector<std::vector<double>>& x,
                                                      const std::vector<int>& y,
                                                      const Hyper& hyper);

/// Selection (optional) + standardizer + logistic weights fitted on the
/// table; the model consumes raw feature rows afterwards.
ClassifierModel fit_pipeline(const FeatureTable& train, const Hyper& hyper,
                             bool with_selection = true, double alpha_sig = 0.05,
                             double redundancy_rho = 0.95);

double predict_logit(const ClassifierModel& model, const std::vector<double>& row);
double predict_proba(const ClassifierModel& model, const std::vector<double>& row);

/// Threshold 0.5 classification metrics, tie-corrected Mann-Whitney AUC,
/// ROC over all distinct score thresholds. Throws on single-class truth.
Metrics evaluate(const ClassifierModel& model, const FeatureTable& table);
Metrics metrics_from_scores(const std::vector<double>& scores, const std::vector<int>& labels);

struct CvResult {
    std::vector<Metrics> folds;
    Metrics mean;
    Metrics stddev;
};

/// Stratified k-fold cross-validation; the standardizer, selection and
/// model are fitted inside each fold. Folds are independent, so they may
/// run on a worker pool without changing any result.
CvResult kfold_cv(const FeatureTable& table, int k, uint64_t seed, const Hyper& hyper,
                  bool with_selection = true, double alpha_sig = 0.05,
                  double redundancy_rho = 0.95, int threads = 1);

/// Mean accuracy drop over seeded shuffles of each feature column.
std::vector<double> permutation_importance(const ClassifierModel& model,
                                           const FeatureTable& table, int repeats = 10,
                                           uint64_t seed = 0);

/// Signed per-selected-feature terms w_j * z_j; together with the bias they
/// sum to the prediction logit exactly.
std::vector<double> local_contributions(const ClassifierModel& model,
                                        const std::vector<double>& row);

std::string model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const std::string& text);
void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

} // namespace toporad
