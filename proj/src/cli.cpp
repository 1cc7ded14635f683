#include "toporad/cli.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "toporad/complex.hpp"
#include "toporad/error.hpp"
#include "toporad/format.hpp"
#include "toporad/growth.hpp"
#include "toporad/io.hpp"
#include "toporad/learn.hpp"
#include "toporad/patches.hpp"
#include "toporad/persistence.hpp"
#include "toporad/stats.hpp"
#include "toporad/svg.hpp"
#include "toporad/table.hpp"
#include "toporad/texture.hpp"
#include "toporad/topo_stats.hpp"

namespace fs = std::filesystem;

namespace toporad {

namespace {

CLI::Option* last(CLI::Option* option) {
    return option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

/// Fully-resolved configuration echoed next to every command's outputs;
/// the file is accepted back through --config.
struct ConfigEcho {
    std::string command;
    std::map<std::string, std::string> entries;

    void put(const std::string& key, const std::string& value) { entries[key] = value; }
    void put(const std::string& key, double value) { entries[key] = g9(value); }
    void put(const std::string& key, long value) { entries[key] = std::to_string(value); }
    void put(const std::string& key, int value) { entries[key] = std::to_string(value); }
    void put(const std::string& key, uint64_t value) { entries[key] = std::to_string(value); }
    void put(const std::string& key, bool value) { entries[key] = value ? "true" : "false"; }

    void write(const fs::path& out_dir) const {
        std::ostringstream text;
        text << "command=" << command << "\n";
        for (const auto& [key, value] : entries) text << key << "=" << value << "\n";
        write_text_file((out_dir / "config.txt").string(), text.str());
    }
};

void run_tasks(size_t count, int threads, const std::function<void(size_t)>& task) {
    if (threads < 1) threads = 1;
    if (threads == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    size_t n = std::min<size_t>(static_cast<size_t>(threads), count);
    for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

fs::path prepare_out(const std::string& out) {
    if (out.empty()) throw Error("--out directory is required");
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    for (const std::string& token : split(text, ','))
        if (!trim(token).empty()) values.push_back(parse_double(token, what));
    if (values.empty()) throw Error(what + " list is empty");
    return values;
}

// ---------------------------------------------------------------- simulate

struct SimulateConfig {
    std::string out;
    std::string alphas = "0.0,0.5,1.0";
    double gamma = 10.0, beta = 0.5, c0 = 1.0;
    double dx = 0.05, dt = 5e-4, t_end = 20.0;
    int n_nodes = 201;
    long sample_every = 100;
    double kappa = 8.0, rips_t_max = 2.0;
    long tda_every = 50;
    size_t max_points = 5000;
    bool svg = false;
    int threads = 4;
    uint64_t seed = 0;
};

int cmd_simulate(const SimulateConfig& config) {
    fs::path out = prepare_out(config.out);
    std::vector<double> alphas = parse_double_list(config.alphas, "--alpha");

    ConfigEcho echo;
    echo.command = "simulate";
    echo.put("out", config.out);
    echo.put("alpha", config.alphas);
    echo.put("gamma", config.gamma);
    echo.put("beta", config.beta);
    echo.put("c0", config.c0);
    echo.put("dx", config.dx);
    echo.put("dt", config.dt);
    echo.put("t-end", config.t_end);
    echo.put("n-nodes", config.n_nodes);
    echo.put("sample-every", config.sample_every);
    echo.put("kappa", config.kappa);
    echo.put("rips-t-max", config.rips_t_max);
    echo.put("tda-every", config.tda_every);
    echo.put("max-points", static_cast<long>(config.max_points));
    echo.put("svg", config.svg);
    echo.put("threads", config.threads);
    echo.put("seed", config.seed);
    echo.write(out);

    struct SweepRow {
        double alpha = 0;
        std::optional<size_t> onset_quiescent;
        std::optional<size_t> onset_necrotic;
    };
    std::vector<SweepRow> sweep(alphas.size());

    run_tasks(alphas.size(), config.threads, [&](size_t a) {
        GrowthParams params;
        params.alpha = alphas[a];
        params.gamma = config.gamma;
        params.beta = config.beta;
        params.c0 = config.c0;
        params.dx = config.dx;
        params.dt = config.dt;
        params.n_nodes = config.n_nodes;
        params.t_end = config.t_end;

        fs::path run_dir = out / ("alpha_" + g9(params.alpha));
        fs::create_directories(run_dir / "clouds");

        std::vector<GrowthState> frames;
        try {
            frames = simulate(params, config.sample_every);
        } catch (const Error& e) {
            throw Error("alpha=" + g9(params.alpha) + ": " + e.what());
        }

        std::ostringstream trajectory;
        trajectory << "step,type,x,density\n";
        for (const GrowthState& frame : frames) {
            for (CellType type :
                 {CellType::proliferative, CellType::quiescent, CellType::necrotic}) {
                const std::vector<double>& density = type == CellType::proliferative
                                                         ? frame.proliferative
                                                         : (type == CellType::quiescent
                                                                ? frame.quiescent
                                                                : frame.necrotic);
                for (size_t i = 0; i < density.size(); ++i)
                    trajectory << frame.step << "," << to_string(type) << "," << g9(frame.x[i])
                               << "," << g9(density[i]) << "\n";
            }
        }
        write_text_file((run_dir / "trajectory.csv").string(), trajectory.str());

        for (size_t f = 0; f < frames.size(); ++f) {
            CellClouds clouds = sample_clouds(frames[f], config.kappa);
            std::ostringstream cloud_csv;
            cloud_csv << "type,x,y\n";
            for (CellType type :
                 {CellType::proliferative, CellType::quiescent, CellType::necrotic}) {
                for (const Point2& p : clouds.of(type).points)
                    cloud_csv << to_string(type) << "," << g9(p.x) << "," << g9(p.y) << "\n";
            }
            write_text_file((run_dir / "clouds" / ("frame_" + std::to_string(f) + ".csv")).string(),
                            cloud_csv.str());
        }

        std::vector<size_t> tda_frames;
        for (size_t f = 0; f < frames.size(); f += static_cast<size_t>(config.tda_every))
            tda_frames.push_back(f);
        std::vector<TopoSeriesRow> series = topo_time_series(frames, tda_frames,
                                                             config.rips_t_max, config.kappa,
                                                             config.max_points);
        std::ostringstream series_csv;
        series_csv << "frame,type,points,pe_h0,pe_h1,hgen\n";
        for (const TopoSeriesRow& row : series)
            series_csv << row.frame << "," << to_string(row.type) << "," << row.points << ","
                       << g9(row.pe_h0) << "," << g9(row.pe_h1) << "," << g9(row.hgen) << "\n";
        write_text_file((run_dir / "topo_series.csv").string(), series_csv.str());

        sweep[a].alpha = params.alpha;
        sweep[a].onset_quiescent = onset_analysis(frames, CellType::quiescent, config.kappa);
        sweep[a].onset_necrotic = onset_analysis(frames, CellType::necrotic, config.kappa);
    });

    std::ostringstream summary;
    summary << "alpha,onset_quiescent,onset_necrotic\n";
    for (const auto& row : sweep) {
        summary << g9(row.alpha) << ","
                << (row.onset_quiescent ? std::to_string(*row.onset_quiescent) : "none") << ","
                << (row.onset_necrotic ? std::to_string(*row.onset_necrotic) : "none") << "\n";
    }
    write_text_file((out / "sweep_summary.csv").string(), summary.str());
    if (config.svg) render_onset_svg((out / "sweep_summary.csv").string(),
                                     (out / "onset.svg").string());
    return 0;
}

// ---------------------------------------------------------------- features

struct FeaturesConfig {
    std::string manifest;
    std::string out;
    int size = 30, stride = 30;
    double min_coverage = 0.5;
    int levels = 32;
    bool auto_contralateral = false;
    std::string dump_patches;
    int threads = 4;
    uint64_t seed = 0;
};

std::vector<double> patch_feature_row(const GrayImage& pixels, int levels) {
    TopoFeatures topo = topo_feature_vector(pixels);
    TextureFeatures texture = haralick_features(compute_glcm(pixels, levels));
    return {static_cast<double>(topo.euler),
            topo.pe_h0,
            topo.pe_h1,
            topo.hgen,
            texture.contrast,
            texture.correlation,
            texture.homogeneity,
            texture.energy};
}

int cmd_features(const FeaturesConfig& config) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = "features";
    echo.put("manifest", config.manifest);
    echo.put("out", config.out);
    echo.put("size", config.size);
    echo.put("stride", config.stride);
    echo.put("min-coverage", config.min_coverage);
    echo.put("levels", config.levels);
    echo.put("auto-contralateral", config.auto_contralateral);
    echo.put("dump-patches", config.dump_patches);
    echo.put("threads", config.threads);
    echo.put("seed", config.seed);
    echo.write(out);

    std::vector<ManifestEntry> entries = load_manifest(config.manifest);
    if (entries.empty()) throw Error("manifest lists no items: " + config.manifest);
    if (!config.dump_patches.empty()) fs::create_directories(config.dump_patches);

    struct ItemResult {
        std::vector<Patch> patches;
        std::string error;
    };
    std::vector<ItemResult> results(entries.size());

    run_tasks(entries.size(), config.threads, [&](size_t i) {
        const ManifestEntry& entry = entries[i];
        try {
            GrayImage image = load_grayscale(entry.image_path);
            RoiMask mask = load_mask(entry.mask_path, entry.label);
            std::vector<Patch> patches = extract_patches(image, mask, config.size, config.stride,
                                                         config.min_coverage, entry.source_id);
            if (config.auto_contralateral && entry.label == TissueLabel::pathologic) {
                RoiMask healthy = mirror_mask(mask);
                std::vector<Patch> extra = extract_patches(image, healthy, config.size,
                                                           config.stride, config.min_coverage,
                                                           entry.source_id);
                patches.insert(patches.end(), extra.begin(), extra.end());
            }
            results[i].patches = std::move(patches);
        } catch (const std::exception& e) {
            results[i].error = e.what();
        }
    });

    FeatureTable table;
    table.feature_names = all_feature_names();
    long failures = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (!results[i].error.empty()) {
            ++failures;
            std::cerr << "features: item " << i << " (" << entries[i].image_path
                      << "): " << results[i].error << "\n";
            continue;
        }
        for (const Patch& patch : results[i].patches) {
            table.rows.push_back(patch_feature_row(patch.pixels, config.levels));
            table.labels.push_back(patch.label == TissueLabel::pathologic);
            table.source_ids.push_back(patch.source_id);
            table.origins.push_back({patch.row, patch.col});
            if (!config.dump_patches.empty()) {
                std::string name = patch.source_id + "_" + std::to_string(patch.row) + "_" +
                                   std::to_string(patch.col) + "_" + to_string(patch.label) +
                                   ".pgm";
                save_pgm(patch.pixels, (fs::path(config.dump_patches) / name).string());
            }
        }
    }
    save_feature_table_csv(table, (out / "features.csv").string());
    return failures == 0 ? 0 : 1;
}

// -------------------------------------------------------------- progression

struct ProgressionConfig {
    std::string pre;
    std::string post;
    std::string out;
    bool per_source = false;
    uint64_t seed = 0;
};

FeatureTable aggregate_by_source(const FeatureTable& table) {
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t i = 0; i < table.size(); ++i) groups[table.source_ids.at(i)].push_back(i);
    FeatureTable out;
    out.feature_names = table.feature_names;
    for (const auto& [id, rows] : groups) {
        std::vector<double> mean(table.feature_names.size(), 0.0);
        for (size_t i : rows)
            for (size_t j = 0; j < mean.size(); ++j) mean[j] += table.rows[i][j];
        for (double& v : mean) v /= static_cast<double>(rows.size());
        out.rows.push_back(std::move(mean));
        out.source_ids.push_back(id);
        out.labels.push_back(table.labels.empty() ? 0 : table.labels[rows.front()]);
        out.origins.push_back({0, 0});
    }
    return out;
}

int cmd_progression(const ProgressionConfig& config) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = "progression";
    echo.put("pre", config.pre);
    echo.put("post", config.post);
    echo.put("out", config.out);
    echo.put("per-source", config.per_source);
    echo.put("seed", config.seed);
    echo.write(out);

    FeatureTable pre = load_feature_table_csv(config.pre);
    FeatureTable post = load_feature_table_csv(config.post);
    if (pre.feature_names != post.feature_names)
        throw Error("pre and post tables have different feature columns");
    if (config.per_source) {
        pre = aggregate_by_source(pre);
        post = aggregate_by_source(post);
    }

    std::ostringstream report;
    report << "feature,mean_pre,sd_pre,mean_post,sd_post,t,df,p\n";
    for (size_t j = 0; j < pre.feature_names.size(); ++j) {
        std::vector<double> a = pre.column(j);
        std::vector<double> b = post.column(j);
        WelchResult welch = welch_t_test(a, b);
        report << pre.feature_names[j] << "," << g9(welch.mean_a) << "," << g9(welch.sd_a) << ","
               << g9(welch.mean_b) << "," << g9(welch.sd_b) << "," << g9(welch.t) << ","
               << g9(welch.df) << "," << g9(welch.p) << "\n";
    }
    write_text_file((out / "progression.csv").string(), report.str());
    return 0;
}

// ---------------------------------------------------------------- classify

struct ClassifyConfig {
    std::string table;
    std::string out;
    std::string feature_sets = "all";
    double train_fraction = 0.7;
    int k = 5;
    double lambda = 1e-3, learning_rate = 0.1, tolerance = 1e-8;
    long max_epochs = 5000;
    double alpha_sig = 0.05, redundancy_rho = 0.95;
    bool group_by_source = false;
    uint64_t seed = 0;
    int threads = 4;
};

nlohmann::ordered_json metrics_json(const Metrics& metrics) {
    return {{"accuracy", metrics.accuracy},
            {"precision", metrics.precision},
            {"recall", metrics.recall},
            {"misclassification_rate", metrics.misclassification_rate},
            {"f1", metrics.f1},
            {"auc", metrics.auc}};
}

void write_metrics_files(const fs::path& out, const std::string& set_name, const CvResult& cv,
                         const Metrics& train, const Metrics& test) {
    std::ostringstream table;
    table << "metric,train,test\n";
    table << "accuracy," << g9(train.accuracy) << "," << g9(test.accuracy) << "\n";
    table << "precision," << g9(train.precision) << "," << g9(test.precision) << "\n";
    table << "recall," << g9(train.recall) << "," << g9(test.recall) << "\n";
    table << "misclassification_rate," << g9(train.misclassification_rate) << ","
          << g9(test.misclassification_rate) << "\n";
    table << "f1," << g9(train.f1) << "," << g9(test.f1) << "\n";
    table << "auc," << g9(train.auc) << "," << g9(test.auc) << "\n";
    write_text_file((out / ("metrics_" + set_name + ".csv")).string(), table.str());

    nlohmann::ordered_json j;
    j["feature_set"] = set_name;
    j["cv"] = nlohmann::ordered_json::object();
    j["cv"]["folds"] = nlohmann::ordered_json::array();
    for (const Metrics& fold : cv.folds) j["cv"]["folds"].push_back(metrics_json(fold));
    j["cv"]["mean"] = metrics_json(cv.mean);
    j["cv"]["std"] = metrics_json(cv.stddev);
    j["train"] = metrics_json(train);
    j["test"] = metrics_json(test);
    write_text_file((out / ("metrics_" + set_name + ".json")).string(), j.dump(2) + "\n");

    std::ostringstream roc;
    roc << "threshold,fpr,tpr\n";
    for (size_t i = 0; i < test.roc.size(); ++i)
        roc << g9(test.roc_thresholds[i]) << "," << g9(test.roc[i].first) << ","
            << g9(test.roc[i].second) << "\n";
    write_text_file((out / ("roc_" + set_name + ".csv")).string(), roc.str());
}

int cmd_classify(const ClassifyConfig& config) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = "classify";
    echo.put("table", config.table);
    echo.put("out", config.out);
    echo.put("feature-sets", config.feature_sets);
    echo.put("train-fraction", config.train_fraction);
    echo.put("k", config.k);
    echo.put("lambda", config.lambda);
    echo.put("learning-rate", config.learning_rate);
    echo.put("max-epochs", config.max_epochs);
    echo.put("tolerance", config.tolerance);
    echo.put("alpha-sig", config.alpha_sig);
    echo.put("redundancy-rho", config.redundancy_rho);
    echo.put("group-by-source", config.group_by_source);
    echo.put("seed", config.seed);
    echo.put("threads", config.threads);
    echo.write(out);

    FeatureTable full = load_feature_table_csv(config.table);

    std::vector<std::string> sets;
    for (const std::string& raw : split(config.feature_sets, ',')) {
        std::string name = trim(raw);
        if (name.empty()) continue;
        if (name == "all") {
            sets.insert(sets.end(), {"topo", "texture", "both"});
        } else if (name == "topo" || name == "texture" || name == "both") {
            sets.push_back(name);
        } else {
            throw Error("unknown feature set '" + name + "' (topo, texture, both or all)");
        }
    }
    if (sets.empty()) throw Error("no feature sets requested");

    Hyper hyper;
    hyper.lambda = config.lambda;
    hyper.learning_rate = config.learning_rate;
    hyper.max_epochs = config.max_epochs;
    hyper.tolerance = config.tolerance;
    hyper.seed = config.seed;

    for (const std::string& set_name : sets) {
        const std::vector<std::string>& names = set_name == "topo"
                                                    ? topo_feature_names()
                                                    : (set_name == "texture"
                                                           ? texture_feature_names()
                                                           : all_feature_names());
        FeatureTable table = full.select_features(names);
        auto [train, test] = split(table, config.train_fraction, config.seed,
                                   config.group_by_source);
        CvResult cv = kfold_cv(train, config.k, config.seed, hyper, true, config.alpha_sig,
                               config.redundancy_rho, config.threads);
        ClassifierModel model = fit_pipeline(train, hyper, true, config.alpha_sig,
                                             config.redundancy_rho);
        Metrics train_metrics = evaluate(model, train);
        Metrics test_metrics = evaluate(model, test);
        save_model(model, (out / ("model_" + set_name + ".json")).string());
        write_metrics_files(out, set_name, cv, train_metrics, test_metrics);

        SelectionReport report = toporad::select_features(train.rows, train.labels,
                                                          train.feature_names, config.alpha_sig,
                                                          config.redundancy_rho);
        std::ostringstream selection;
        selection << "feature,rho,p,kept,reason\n";
        for (const FeatureSelection& f : report.features)
            selection << f.name << "," << g9(f.rho) << "," << g9(f.p) << ","
                      << (f.kept ? "true" : "false") << "," << to_string(f.reason) << "\n";
        write_text_file((out / ("selection_" + set_name + ".csv")).string(), selection.str());
    }
    return 0;
}

// ------------------------------------------------------------------ explain

struct ExplainConfig {
    std::string model;
    std::string table;
    std::string out;
    std::string rows; // comma-separated row indices; empty = all
    int repeats = 10;
    uint64_t seed = 0;
};

int cmd_explain(const ExplainConfig& config) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = "explain";
    echo.put("model", config.model);
    echo.put("table", config.table);
    echo.put("out", config.out);
    echo.put("rows", config.rows);
    echo.put("repeats", config.repeats);
    echo.put("seed", config.seed);
    echo.write(out);

    ClassifierModel model = load_model(config.model);
    FeatureTable table = load_feature_table_csv(config.table);
    if (table.feature_names != model.feature_names)
        throw Error("table columns do not match the model's feature names");

    std::vector<double> importance = permutation_importance(model, table, config.repeats,
                                                            config.seed);
    std::ostringstream importance_csv;
    importance_csv << "feature,importance\n";
    for (size_t j = 0; j < table.feature_names.size(); ++j)
        importance_csv << table.feature_names[j] << "," << g9(importance[j]) << "\n";
    write_text_file((out / "importance.csv").string(), importance_csv.str());

    std::vector<size_t> row_ids;
    if (trim(config.rows).empty()) {
        for (size_t i = 0; i < table.size(); ++i) row_ids.push_back(i);
    } else {
        for (const std::string& token : split(config.rows, ',')) {
            if (trim(token).empty()) continue;
            long id = parse_long(token, "--rows");
            if (id < 0 || static_cast<size_t>(id) >= table.size())
                throw Error("unknown row id " + std::to_string(id));
            row_ids.push_back(static_cast<size_t>(id));
        }
    }

    std::ostringstream contributions_csv;
    contributions_csv << "row,logit,probability,bias";
    for (const std::string& name : table.feature_names) contributions_csv << "," << name;
    contributions_csv << "\n";
    for (size_t id : row_ids) {
        std::vector<double> contributions = local_contributions(model, table.rows[id]);
        double logit = predict_logit(model, table.rows[id]);
        contributions_csv << id << "," << g9(logit) << "," << g9(predict_proba(model, table.rows[id]))
                          << "," << g9(model.bias);
        size_t k = 0;
        for (size_t j = 0; j < table.feature_names.size(); ++j)
            contributions_csv << ","
                              << g9(model.selected[j] ? contributions[k++] : 0.0);
        contributions_csv << "\n";
    }
    write_text_file((out / "contributions.csv").string(), contributions_csv.str());
    return 0;
}

// ------------------------------------------------------------------- render

struct RenderConfig {
    std::string kind;
    std::string in;
    std::string out;
    uint64_t seed = 0;
};

int cmd_render(const RenderConfig& config) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = "render";
    echo.put("kind", config.kind);
    echo.put("in", config.in);
    echo.put("out", config.out);
    echo.put("seed", config.seed);
    echo.write(out);

    std::string target = (out / (config.kind + ".svg")).string();
    if (config.kind == "barcode") render_barcode_svg(config.in, target);
    else if (config.kind == "diagram") render_diagram_svg(config.in, target);
    else if (config.kind == "roc") render_roc_svg(config.in, target);
    else if (config.kind == "timeseries") render_timeseries_svg(config.in, target);
    else if (config.kind == "onset") render_onset_svg(config.in, target);
    else throw Error("unknown render kind '" + config.kind + "'");
    return 0;
}

// ---------------------------------------------------------------------- tda

struct TdaConfig {
    std::string in;
    std::string out;
    bool generators = false;
    double t_max = 2.0;
    size_t max_points = 5000;
    uint64_t seed = 0;
};

int cmd_tda(const TdaConfig& config, bool image_mode) {
    fs::path out = prepare_out(config.out);
    ConfigEcho echo;
    echo.command = image_mode ? "tda image" : "tda cloud";
    echo.put("in", config.in);
    echo.put("out", config.out);
    echo.put("generators", config.generators);
    if (!image_mode) {
        echo.put("t-max", config.t_max);
        echo.put("max-points", static_cast<long>(config.max_points));
    }
    echo.put("seed", config.seed);
    echo.write(out);

    FilteredComplex complex =
        image_mode ? lower_star_filtration(load_grayscale(config.in))
                   : rips_filtration(load_point_cloud(config.in), config.t_max, config.max_points);
    Barcode barcode = compute_persistence(complex);
    save_barcode_csv(barcode, (out / "barcode.csv").string());
    if (config.generators) save_generators(barcode, (out / "generators.txt").string());
    return 0;
}

// ------------------------------------------------------------------- driver

std::vector<std::string> expand_config_file(const std::vector<std::string>& args) {
    std::string config_path;
    std::vector<std::string> passthrough;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw Error("--config needs a file path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            passthrough.push_back(args[i]);
        }
    }
    if (config_path.empty()) return args;

    std::string command;
    std::vector<std::string> expanded;
    std::istringstream in(read_text_file(config_path));
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) throw Error("config line is not key=value: " + t);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key == "command") command = value;
        else if (value == "true") expanded.push_back("--" + key);
        else if (value == "false") { /* default */ }
        else if (!value.empty()) expanded.push_back("--" + key + "=" + value);
    }
    if (command.empty()) throw Error("config file does not name a command: " + config_path);

    std::vector<std::string> result;
    for (const std::string& word : split(command, ' '))
        if (!word.empty()) result.push_back(word);
    result.insert(result.end(), expanded.begin(), expanded.end());
    // explicit CLI arguments follow the config so they win under take-last
    result.insert(result.end(), passthrough.begin(), passthrough.end());
    return result;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        std::vector<std::string> argv = expand_config_file(args);

        CLI::App app{"topological radiomics toolkit"};
        app.require_subcommand(1);

        SimulateConfig simulate_config;
        CLI::App* simulate_cmd =
            app.add_subcommand("simulate", "integrate the tumour growth model over an alpha sweep");
        last(simulate_cmd->add_option("--out", simulate_config.out, "output directory"))->required();
        last(simulate_cmd->add_option("--alpha", simulate_config.alphas,
                                      "comma-separated alpha values"));
        last(simulate_cmd->add_option("--gamma", simulate_config.gamma, "nutrient gamma"));
        last(simulate_cmd->add_option("--beta", simulate_config.beta, "growth beta"));
        last(simulate_cmd->add_option("--c0", simulate_config.c0, "baseline nutrient"));
        last(simulate_cmd->add_option("--dx", simulate_config.dx, "grid spacing"));
        last(simulate_cmd->add_option("--dt", simulate_config.dt, "timestep"));
        last(simulate_cmd->add_option("--t-end", simulate_config.t_end, "integration end time"));
        last(simulate_cmd->add_option("--n-nodes", simulate_config.n_nodes, "grid nodes"));
        last(simulate_cmd->add_option("--sample-every", simulate_config.sample_every,
                                      "record a frame every N steps"));
        last(simulate_cmd->add_option("--kappa", simulate_config.kappa,
                                      "cloud points per unit density"));
        last(simulate_cmd->add_option("--rips-t-max", simulate_config.rips_t_max,
                                      "Rips scale for the topo series"));
        last(simulate_cmd->add_option("--tda-every", simulate_config.tda_every,
                                      "compute the topo series every N recorded frames"));
        last(simulate_cmd->add_option("--max-points", simulate_config.max_points,
                                      "Rips point-count cap"));
        simulate_cmd->add_flag("--svg", simulate_config.svg, "render onset-vs-alpha SVG");
        last(simulate_cmd->add_option("--threads", simulate_config.threads, "worker threads"));
        last(simulate_cmd->add_option("--seed", simulate_config.seed, "random seed"));

        FeaturesConfig features_config;
        CLI::App* features_cmd =
            app.add_subcommand("features", "extract per-patch topological and texture features");
        last(features_cmd->add_option("--manifest", features_config.manifest,
                                      "image_path,mask_path,label,source_id manifest"))
            ->required();
        last(features_cmd->add_option("--out", features_config.out, "output directory"))->required();
        last(features_cmd->add_option("--size", features_config.size, "patch size"));
        last(features_cmd->add_option("--stride", features_config.stride, "patch stride"));
        last(features_cmd->add_option("--min-coverage", features_config.min_coverage,
                                      "minimum in-mask fraction per window"));
        last(features_cmd->add_option("--levels", features_config.levels, "GLCM grey levels"));
        features_cmd->add_flag("--auto-contralateral", features_config.auto_contralateral,
                               "also extract mirrored healthy patches for pathologic items");
        last(features_cmd->add_option("--dump-patches", features_config.dump_patches,
                                      "directory for per-patch PGM dumps"));
        last(features_cmd->add_option("--threads", features_config.threads, "worker threads"));
        last(features_cmd->add_option("--seed", features_config.seed, "random seed"));

        ProgressionConfig progression_config;
        CLI::App* progression_cmd =
            app.add_subcommand("progression", "Welch comparison of pre/post feature tables");
        last(progression_cmd->add_option("--pre", progression_config.pre, "pre feature table"))
            ->required();
        last(progression_cmd->add_option("--post", progression_config.post, "post feature table"))
            ->required();
        last(progression_cmd->add_option("--out", progression_config.out, "output directory"))
            ->required();
        progression_cmd->add_flag("--per-source", progression_config.per_source,
                                  "aggregate rows to per-source means first");
        last(progression_cmd->add_option("--seed", progression_config.seed, "random seed"));

        ClassifyConfig classify_config;
        CLI::App* classify_cmd =
            app.add_subcommand("classify", "select, split, cross-validate, train and evaluate");
        last(classify_cmd->add_option("--table", classify_config.table, "feature table CSV"))
            ->required();
        last(classify_cmd->add_option("--out", classify_config.out, "output directory"))->required();
        last(classify_cmd->add_option("--feature-sets", classify_config.feature_sets,
                                      "comma list of topo,texture,both or all"));
        last(classify_cmd->add_option("--train-fraction", classify_config.train_fraction,
                                      "training fraction"));
        last(classify_cmd->add_option("--k", classify_config.k, "cross-validation folds"));
        last(classify_cmd->add_option("--lambda", classify_config.lambda, "L2 strength"));
        last(classify_cmd->add_option("--learning-rate", classify_config.learning_rate,
                                      "initial learning rate"));
        last(classify_cmd->add_option("--max-epochs", classify_config.max_epochs, "epoch cap"));
        last(classify_cmd->add_option("--tolerance", classify_config.tolerance,
                                      "gradient-norm stop"));
        last(classify_cmd->add_option("--alpha-sig", classify_config.alpha_sig,
                                      "selection significance level"));
        last(classify_cmd->add_option("--redundancy-rho", classify_config.redundancy_rho,
                                      "selection redundancy threshold"));
        classify_cmd->add_flag("--group-by-source", classify_config.group_by_source,
                               "keep each source_id on one side of the split");
        last(classify_cmd->add_option("--seed", classify_config.seed, "random seed"));
        last(classify_cmd->add_option("--threads", classify_config.threads, "worker threads"));

        ExplainConfig explain_config;
        CLI::App* explain_cmd =
            app.add_subcommand("explain", "permutation importance and local contributions");
        last(explain_cmd->add_option("--model", explain_config.model, "model JSON"))->required();
        last(explain_cmd->add_option("--table", explain_config.table, "feature table CSV"))
            ->required();
        last(explain_cmd->add_option("--out", explain_config.out, "output directory"))->required();
        last(explain_cmd->add_option("--rows", explain_config.rows,
                                     "comma list of row ids (default: all)"));
        last(explain_cmd->add_option("--repeats", explain_config.repeats,
                                     "shuffles per feature"));
        last(explain_cmd->add_option("--seed", explain_config.seed, "random seed"));

        RenderConfig render_config;
        CLI::App* render_cmd = app.add_subcommand("render", "render a CSV artifact as SVG");
        last(render_cmd->add_option("--kind", render_config.kind,
                                    "barcode, diagram, roc, timeseries or onset"))
            ->required();
        last(render_cmd->add_option("--in", render_config.in, "input CSV"))->required();
        last(render_cmd->add_option("--out", render_config.out, "output directory"))->required();
        last(render_cmd->add_option("--seed", render_config.seed, "random seed"));

        CLI::App* tda_cmd = app.add_subcommand("tda", "persistence barcodes of images and clouds");
        tda_cmd->require_subcommand(1);
        TdaConfig tda_image_config;
        CLI::App* tda_image_cmd = tda_cmd->add_subcommand("image", "lower-star barcode of a raster");
        last(tda_image_cmd->add_option("--in", tda_image_config.in, "PGM or CSV grid"))->required();
        last(tda_image_cmd->add_option("--out", tda_image_config.out, "output directory"))
            ->required();
        tda_image_cmd->add_flag("--generators", tda_image_config.generators,
                                "also write generator vertex ids");
        last(tda_image_cmd->add_option("--seed", tda_image_config.seed, "random seed"));
        TdaConfig tda_cloud_config;
        CLI::App* tda_cloud_cmd = tda_cmd->add_subcommand("cloud", "Rips barcode of a point cloud");
        last(tda_cloud_cmd->add_option("--in", tda_cloud_config.in, "point-cloud CSV"))->required();
        last(tda_cloud_cmd->add_option("--out", tda_cloud_config.out, "output directory"))
            ->required();
        last(tda_cloud_cmd->add_option("--t-max", tda_cloud_config.t_max, "Rips scale"));
        last(tda_cloud_cmd->add_option("--max-points", tda_cloud_config.max_points,
                                       "point-count cap"));
        tda_cloud_cmd->add_flag("--generators", tda_cloud_config.generators,
                                "also write generator vertex ids");
        last(tda_cloud_cmd->add_option("--seed", tda_cloud_config.seed, "random seed"));

        std::vector<const char*> cargs;
        cargs.push_back("toporad");
        for (const std::string& a : argv) cargs.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            return app.exit(e);
        }

        if (simulate_cmd->parsed()) return cmd_simulate(simulate_config);
        if (features_cmd->parsed()) return cmd_features(features_config);
        if (progression_cmd->parsed()) return cmd_progression(progression_config);
        if (classify_cmd->parsed()) return cmd_classify(classify_config);
        if (explain_cmd->parsed()) return cmd_explain(explain_config);
        if (render_cmd->parsed()) return cmd_render(render_config);
        if (tda_cmd->parsed()) {
            if (tda_image_cmd->parsed()) return cmd_tda(tda_image_config, true);
            return cmd_tda(tda_cloud_config, false);
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "toporad: " << e.what() << "\n";
        return 1;
    }
}

} // namespace toporad
