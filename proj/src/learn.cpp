#include "toporad/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "toporad/error.hpp"
#include "toporad/format.hpp"
#include "toporad/rng.hpp"

namespace toporad {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// numerically stable mean logistic loss
double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                     const std::vector<double>& w, double bias, double lambda) {
    double loss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        double z = bias;
        for (size_t j = 0; j < w.size(); ++j) z += w[j] * x[i][j];
        double margin = y[i] ? z : -z;
        loss += margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
    }
    loss /= static_cast<double>(x.size());
    double reg = 0;
    for (double v : w) reg += v * v;
    return loss + 0.5 * lambda * reg;
}

// largest-remainder apportionment of `target` slots across class counts
std::vector<size_t> apportion(const std::vector<size_t>& counts, double fraction) {
    std::vector<size_t> quota(counts.size());
    std::vector<std::pair<double, size_t>> remainders;
    size_t total = 0, assigned = 0;
    for (size_t c : counts) total += c;
    size_t target = static_cast<size_t>(std::llround(fraction * static_cast<double>(total)));
    for (size_t i = 0; i < counts.size(); ++i) {
        double exact = fraction * static_cast<double>(counts[i]);
        quota[i] = static_cast<size_t>(exact);
        remainders.push_back({exact - static_cast<double>(quota[i]), i});
        assigned += quota[i];
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t k = 0; assigned < target && k < remainders.size(); ++k) {
        size_t i = remainders[k].second;
        if (quota[i] < counts[i]) {
            ++quota[i];
            ++assigned;
        }
    }
    return quota;
}

} // namespace

size_t ClassifierModel::selected_count() const {
    return static_cast<size_t>(std::count(selected.begin(), selected.end(), 1));
}

std::pair<FeatureTable, FeatureTable> split(const FeatureTable& table, double train_fraction,
                                            uint64_t seed, bool group_by_source) {
    if (table.size() < 10) throw Error("split needs at least 10 rows");
    if (!(train_fraction > 0 && train_fraction < 1))
        throw Error("train fraction must lie in (0, 1)");

    std::vector<size_t> train_rows, test_rows;
    if (!group_by_source) {
        // per class: seeded shuffle, then largest-remainder quota to train
        std::vector<std::vector<size_t>> by_class(2);
        for (size_t i = 0; i < table.size(); ++i) by_class[table.labels[i] ? 1 : 0].push_back(i);
        std::vector<size_t> counts = {by_class[0].size(), by_class[1].size()};
        std::vector<size_t> quota = apportion(counts, train_fraction);
        for (int c = 0; c < 2; ++c) {
            Rng rng = Rng::derive(seed, 0x5eed5eedULL, static_cast<uint64_t>(c));
            rng.shuffle(by_class[c]);
            for (size_t k = 0; k < by_class[c].size(); ++k)
                (k < quota[c] ? train_rows : test_rows).push_back(by_class[c][k]);
        }
    } else {
        // whole source groups on one side, stratified by group label
        std::map<std::string, std::vector<size_t>> groups;
        for (size_t i = 0; i < table.size(); ++i) groups[table.source_ids.at(i)].push_back(i);
        std::vector<std::vector<std::pair<std::string, std::vector<size_t>>>> by_class(2);
        for (auto& [id, rows] : groups) {
            size_t positives = 0;
            for (size_t i : rows) positives += table.labels[i] ? 1 : 0;
            by_class[positives * 2 >= rows.size() ? 1 : 0].push_back({id, rows});
        }
        for (int c = 0; c < 2; ++c) {
            Rng rng = Rng::derive(seed, 0x6eed6eedULL, static_cast<uint64_t>(c));
            rng.shuffle(by_class[c]);
            size_t class_rows = 0, taken = 0;
            for (const auto& [id, rows] : by_class[c]) class_rows += rows.size();
            for (const auto& [id, rows] : by_class[c]) {
                bool to_train =
                    static_cast<double>(taken) < train_fraction * static_cast<double>(class_rows);
                for (size_t i : rows) (to_train ? train_rows : test_rows).push_back(i);
                if (to_train) taken += rows.size();
            }
        }
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    auto has_both = [&table](const std::vector<size_t>& rows) {
        bool pos = false, neg = false;
        for (size_t i : rows) (table.labels[i] ? pos : neg) = true;
        return pos && neg;
    };
    if (!has_both(train_rows) || !has_both(test_rows))
        throw Error("a class is absent from one side of the split");
    return {table.select_rows(train_rows), table.select_rows(test_rows)};
}

std::pair<std::vector<double>, double> train_logistic(const std::vector<std::vector<double>>& x,
                                                      const std::vector<int>& y,
                                                      const Hyper& hyper) {
    if (x.empty() || x.size() != y.size()) throw Error("bad training input");
    const size_t cols = x.front().size();
    std::vector<double> w(cols, 0.0);
    double bias = 0;
    double lr = hyper.learning_rate;
    double loss = logistic_loss(x, y, w, bias, hyper.lambda);
    const double n = static_cast<double>(x.size());

    std::vector<double> grad(cols);
    for (long epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_bias = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            double z = bias;
            for (size_t j = 0; j < cols; ++j) z += w[j] * x[i][j];
            double err = sigmoid(z) - static_cast<double>(y[i]);
            for (size_t j = 0; j < cols; ++j) grad[j] += err * x[i][j];
            grad_bias += err;
        }
        double norm2 = 0;
        for (size_t j = 0; j < cols; ++j) {
            grad[j] = grad[j] / n + hyper.lambda * w[j];
            norm2 += grad[j] * grad[j];
        }
        grad_bias /= n;
        norm2 += grad_bias * grad_bias;
        if (!std::isfinite(norm2)) throw Error("non-finite loss gradient; check hyperparameters");
        if (std::sqrt(norm2) < hyper.tolerance) break;

        std::vector<double> w_next = w;
        for (size_t j = 0; j < cols; ++j) w_next[j] -= lr * grad[j];
        double bias_next = bias - lr * grad_bias;
        double loss_next = logistic_loss(x, y, w_next, bias_next, hyper.lambda);
        if (!std::isfinite(loss_next)) throw Error("non-finite loss; check hyperparameters");
        if (loss_next > loss) {
            lr /= 2; // step rejected
            continue;
        }
        w = std::move(w_next);
        bias = bias_next;
        loss = loss_next;
    }
    return {w, bias};
}

ClassifierModel fit_pipeline(const FeatureTable& train, const Hyper& hyper, bool with_selection,
                             double alpha_sig, double redundancy_rho) {
    ClassifierModel model;
    model.feature_names = train.feature_names;
    model.hyper = hyper;
    if (with_selection) {
        SelectionReport report = toporad::select_features(train.rows, train.labels,
                                                          train.feature_names, alpha_sig,
                                                          redundancy_rho);
        model.selected = report.kept_mask();
    } else {
        model.selected.assign(train.feature_names.size(), 1);
    }
    model.standardizer = standardize_fit(train.rows);

    std::vector<std::vector<double>> x;
    x.reserve(train.size());
    for (const auto& row : train.rows) {
        std::vector<double> z = model.standardizer.apply(row);
        std::vector<double> keep;
        for (size_t j = 0; j < z.size(); ++j)
            if (model.selected[j]) keep.push_back(z[j]);
        x.push_back(std::move(keep));
    }
    auto [weights, bias] = train_logistic(x, train.labels, hyper);
    model.weights = std::move(weights);
    model.bias = bias;
    return model;
}

double predict_logit(const ClassifierModel& model, const std::vector<double>& row) {
    std::vector<double> z = model.standardizer.apply(row);
    double logit = model.bias;
    size_t k = 0;
    for (size_t j = 0; j < z.size(); ++j)
        if (model.selected[j]) logit += model.weights[k++] * z[j];
    return logit;
}

double predict_proba(const ClassifierModel& model, const std::vector<double>& row) {
    return sigmoid(predict_logit(model, row));
}

Metrics metrics_from_scores(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty()) throw Error("bad evaluation input");
    long positives = std::count(labels.begin(), labels.end(), 1);
    long negatives = static_cast<long>(labels.size()) - positives;
    if (positives == 0 || negatives == 0)
        throw Error("evaluation set contains a single class; AUC undefined");

    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        bool predicted = scores[i] >= 0.5;
        if (predicted && labels[i]) ++tp;
        else if (predicted && !labels[i]) ++fp;
        else if (!predicted && !labels[i]) ++tn;
        else ++fn;
    }
    Metrics metrics;
    double n = static_cast<double>(scores.size());
    metrics.accuracy = static_cast<double>(tp + tn) / n;
    metrics.misclassification_rate = 1.0 - metrics.accuracy;
    metrics.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    metrics.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    metrics.f1 = metrics.precision + metrics.recall == 0
                     ? 0.0
                     : 2.0 * metrics.precision * metrics.recall /
                           (metrics.precision + metrics.recall);

    // tie-corrected Mann-Whitney AUC via average ranks of the scores
    std::vector<double> ranks = average_ranks(scores);
    double rank_sum = 0;
    for (size_t i = 0; i < scores.size(); ++i)
        if (labels[i]) rank_sum += ranks[i];
    double np = static_cast<double>(positives), nn = static_cast<double>(negatives);
    metrics.auc = (rank_sum - np * (np + 1) / 2.0) / (np * nn);

    // ROC across all distinct thresholds, highest first
    std::vector<double> distinct = scores;
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    metrics.roc.push_back({0.0, 0.0});
    metrics.roc_thresholds.push_back(std::numeric_limits<double>::infinity());
    for (double threshold : distinct) {
        long tpc = 0, fpc = 0;
        for (size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= threshold) (labels[i] ? tpc : fpc) += 1;
        }
        metrics.roc.push_back({static_cast<double>(fpc) / nn, static_cast<double>(tpc) / np});
        metrics.roc_thresholds.push_back(threshold);
    }
    return metrics;
}

Metrics evaluate(const ClassifierModel& model, const FeatureTable& table) {
    std::vector<double> scores;
    scores.reserve(table.size());
    for (const auto& row : table.rows) scores.push_back(predict_proba(model, row));
    return metrics_from_scores(scores, table.labels);
}

namespace {

Metrics aggregate(const std::vector<Metrics>& folds, bool stddev) {
    auto collect = [&folds](auto field) {
        std::vector<double> v;
        for (const Metrics& m : folds) v.push_back(m.*field);
        return v;
    };
    auto reduce = [stddev](const std::vector<double>& v) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        if (!stddev) return mean;
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(v.size()));
    };
    Metrics out;
    out.accuracy = reduce(collect(&Metrics::accuracy));
    out.precision = reduce(collect(&Metrics::precision));
    out.recall = reduce(collect(&Metrics::recall));
    out.misclassification_rate = reduce(collect(&Metrics::misclassification_rate));
    out.f1 = reduce(collect(&Metrics::f1));
    out.auc = reduce(collect(&Metrics::auc));
    return out;
}

} // namespace

CvResult kfold_cv(const FeatureTable& table, int k, uint64_t seed, const Hyper& hyper,
                  bool with_selection, double alpha_sig, double redundancy_rho, int threads) {
    if (k < 2) throw Error("k-fold needs k >= 2");
    std::vector<std::vector<size_t>> by_class(2);
    for (size_t i = 0; i < table.size(); ++i) by_class[table.labels[i] ? 1 : 0].push_back(i);
    if (by_class[0].size() < static_cast<size_t>(k) || by_class[1].size() < static_cast<size_t>(k))
        throw Error("each class needs at least k rows for stratified folds");

    std::vector<std::vector<size_t>> folds(k);
    for (int c = 0; c < 2; ++c) {
        Rng rng = Rng::derive(seed, 0xf01dULL, static_cast<uint64_t>(c));
        rng.shuffle(by_class[c]);
        for (size_t i = 0; i < by_class[c].size(); ++i)
            folds[i % k].push_back(by_class[c][i]);
    }

    CvResult result;
    result.folds.resize(k);
    auto run_fold = [&](int f) {
        std::vector<size_t> train_rows, held_rows = folds[f];
        for (int g = 0; g < k; ++g)
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());
        std::sort(held_rows.begin(), held_rows.end());
        FeatureTable train = table.select_rows(train_rows);
        FeatureTable held = table.select_rows(held_rows);
        ClassifierModel model = fit_pipeline(train, hyper, with_selection, alpha_sig,
                                             redundancy_rho);
        result.folds[f] = evaluate(model, held);
    };
    if (threads <= 1) {
        for (int f = 0; f < k; ++f) run_fold(f);
    } else {
        std::atomic<int> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        auto worker = [&] {
            for (int f = next++; f < k; f = next++) {
                try {
                    run_fold(f);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(threads, k); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    result.mean = aggregate(result.folds, false);
    result.stddev = aggregate(result.folds, true);
    return result;
}

std::vector<double> permutation_importance(const ClassifierModel& model,
                                           const FeatureTable& table, int repeats,
                                           uint64_t seed) {
    if (table.size() == 0) throw Error("permutation importance needs rows");
    Metrics baseline = evaluate(model, table);
    const size_t cols = table.feature_names.size();
    std::vector<double> importance(cols, 0.0);
    for (size_t j = 0; j < cols; ++j) {
        double drop_sum = 0;
        for (int r = 0; r < repeats; ++r) {
            Rng rng = Rng::derive(seed, static_cast<uint64_t>(j) + 1, static_cast<uint64_t>(r));
            std::vector<size_t> perm(table.size());
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm);
            std::vector<double> scores;
            scores.reserve(table.size());
            for (size_t i = 0; i < table.size(); ++i) {
                std::vector<double> row = table.rows[i];
                row[j] = table.rows[perm[i]][j];
                scores.push_back(predict_proba(model, row));
            }
            Metrics shuffled = metrics_from_scores(scores, table.labels);
            drop_sum += baseline.accuracy - shuffled.accuracy;
        }
        importance[j] = drop_sum / static_cast<double>(repeats);
    }
    return importance;
}

std::vector<double> local_contributions(const ClassifierModel& model,
                                        const std::vector<double>& row) {
    std::vector<double> z = model.standardizer.apply(row);
    std::vector<double> contributions;
    size_t k = 0;
    for (size_t j = 0; j < z.size(); ++j)
        if (model.selected[j]) contributions.push_back(model.weights[k++] * z[j]);
    return contributions;
}

std::string model_to_json(const ClassifierModel& model) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["feature_names"] = model.feature_names;
    j["means"] = model.standardizer.means;
    j["stds"] = model.standardizer.stds;
    j["constant"] = model.standardizer.constant;
    j["selected"] = model.selected;
    j["weights"] = model.weights;
    j["bias"] = model.bias;
    j["hyper"] = {{"lambda", model.hyper.lambda},
                  {"learning_rate", model.hyper.learning_rate},
                  {"max_epochs", model.hyper.max_epochs},
                  {"tolerance", model.hyper.tolerance},
                  {"seed", model.hyper.seed}};
    return j.dump(2) + "\n";
}

ClassifierModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<int>() != 1) throw Error("unsupported model schema version");
    ClassifierModel model;
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.standardizer.means = j.at("means").get<std::vector<double>>();
    model.standardizer.stds = j.at("stds").get<std::vector<double>>();
    model.standardizer.constant = j.at("constant").get<std::vector<uint8_t>>();
    model.selected = j.at("selected").get<std::vector<uint8_t>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.hyper.lambda = j.at("hyper").at("lambda").get<double>();
    model.hyper.learning_rate = j.at("hyper").at("learning_rate").get<double>();
    model.hyper.max_epochs = j.at("hyper").at("max_epochs").get<long>();
    model.hyper.tolerance = j.at("hyper").at("tolerance").get<double>();
    model.hyper.seed = j.at("hyper").at("seed").get<uint64_t>();
    if (model.weights.size() != model.selected_count())
        throw Error("model weight count does not match the selected features");
    return model;
}

void save_model(const ClassifierModel& model, const std::string& path) {
    write_text_file(path, model_to_json(model));
}

ClassifierModel load_model(const std::string& path) {
    return model_from_json(read_text_file(path));
}

} // namespace toporad
