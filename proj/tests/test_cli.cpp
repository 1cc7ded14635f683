#include <doctest.h>

#include <filesystem>
#include <map>

#include "toporad/cli.hpp"
#include "toporad/format.hpp"
#include "toporad/io.hpp"
#include "toporad/learn.hpp"
#include "toporad/rng.hpp"
#include "toporad/table.hpp"
#include "test_util.hpp"

using namespace toporad;
using test::TempDir;
namespace fs = std::filesystem;

namespace {

int cli(std::initializer_list<std::string> args) { return run_cli(std::vector<std::string>(args)); }

std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        files[fs::relative(entry.path(), root).string()] = read_text_file(entry.path().string());
    }
    return files;
}

long count_matches(const std::string& text, const std::string& needle) {
    long count = 0;
    size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

void write_constant_pgm(const std::string& path, int side, uint16_t value, int maxval) {
    save_pgm(GrayImage(side, side, std::vector<uint16_t>(static_cast<size_t>(side) * side, value),
                       maxval),
             path);
}

FeatureTable synthetic_table(size_t n, uint64_t seed, double separation) {
    Rng rng(seed);
    FeatureTable table;
    table.feature_names = all_feature_names();
    for (size_t i = 0; i < n; ++i) {
        int label = static_cast<int>(i % 2);
        double sign = label ? 1.0 : -1.0;
        std::vector<double> row(8);
        row[0] = rng.normal(-690 - 10 * sign * separation, 40); // euler
        row[1] = rng.normal(0.5 + 0.1 * sign * separation, 0.1); // pe_h0 carries signal
        row[2] = rng.normal(0.7, 0.15);
        row[3] = rng.normal(0.3, 0.2);
        row[4] = rng.normal(2.0, 1.0);
        row[5] = rng.normal(0.1, 0.5);
        row[6] = rng.normal(0.7 + 0.1 * sign * separation, 0.08); // homogeneity too
        row[7] = rng.normal(0.5, 0.1);
        table.rows.push_back(std::move(row));
        table.labels.push_back(label);
        table.source_ids.push_back("s" + std::to_string(i % 20));
        table.origins.push_back({static_cast<int>(i), 0});
    }
    return table;
}

} // namespace

TEST_CASE("features command: constant image, both labels, exact row") {
    TempDir dir("cli_features");
    write_constant_pgm(dir.file("img.pgm"), 30, 7, 255);
    write_constant_pgm(dir.file("mask.pgm"), 30, 255, 255);
    write_text_file(dir.file("manifest.csv"),
                    "image_path,mask_path,label,source_id\n" + dir.file("img.pgm") + "," +
                        dir.file("mask.pgm") + ",pathologic,p1\n" + dir.file("img.pgm") + "," +
                        dir.file("mask.pgm") + ",healthy,p1\n");
    std::string out = dir.file("out");
    REQUIRE(cli({"features", "--manifest", dir.file("manifest.csv"), "--out", out}) == 0);

    FeatureTable table = load_feature_table_csv(out + "/features.csv");
    REQUIRE(table.size() == 2);
    CHECK(table.labels[0] == 1);
    CHECK(table.labels[1] == 0);
    std::vector<double> expected = {1, 0, 0, 0, 0, 1, 1, 1};
    for (size_t j = 0; j < 8; ++j) CHECK(table.rows[0][j] == expected[j]);
    CHECK(fs::exists(fs::path(out) / "config.txt"));
}

TEST_CASE("features command: per-item failures continue and flip the exit code") {
    TempDir dir("cli_fail");
    write_constant_pgm(dir.file("img.pgm"), 30, 7, 255);
    write_constant_pgm(dir.file("mask.pgm"), 30, 255, 255);
    write_text_file(dir.file("manifest.csv"),
                    dir.file("missing.pgm") + "," + dir.file("mask.pgm") + ",pathologic,p1\n" +
                        dir.file("img.pgm") + "," + dir.file("mask.pgm") + ",healthy,p2\n");
    std::string out = dir.file("out");
    CHECK(cli({"features", "--manifest", dir.file("manifest.csv"), "--out", out}) == 1);
    FeatureTable table = load_feature_table_csv(out + "/features.csv");
    CHECK(table.size() == 1); // the healthy item still made it
}

TEST_CASE("progression command: identical tables give p = 1") {
    TempDir dir("cli_prog");
    FeatureTable table = synthetic_table(60, 7, 0.0);
    save_feature_table_csv(table, dir.file("pre.csv"));
    save_feature_table_csv(table, dir.file("post.csv"));
    std::string out = dir.file("out");
    REQUIRE(cli({"progression", "--pre", dir.file("pre.csv"), "--post", dir.file("post.csv"),
                 "--out", out}) == 0);

    std::string report = read_text_file(out + "/progression.csv");
    CHECK(report.rfind("feature,mean_pre,sd_pre,mean_post,sd_post,t,df,p", 0) == 0);
    // every row: t = 0, p = 1
    std::istringstream lines(report);
    std::string line;
    std::getline(lines, line);
    long rows = 0;
    while (std::getline(lines, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        REQUIRE(cells.size() == 8);
        CHECK(parse_double(cells[5], "t") == 0.0);
        CHECK(parse_double(cells[7], "p") == doctest::Approx(1.0).epsilon(1e-9));
        ++rows;
    }
    CHECK(rows == 8);

    // column mismatch is an error
    FeatureTable other = table.select_features(topo_feature_names());
    save_feature_table_csv(other, dir.file("short.csv"));
    CHECK(cli({"progression", "--pre", dir.file("pre.csv"), "--post", dir.file("short.csv"),
               "--out", dir.file("out2")}) == 1);

    // per-source aggregation collapses rows to source means first
    REQUIRE(cli({"progression", "--pre", dir.file("pre.csv"), "--post", dir.file("post.csv"),
                 "--out", dir.file("out3"), "--per-source"}) == 0);
    std::string per_source = read_text_file(dir.file("out3") + "/progression.csv");
    CHECK(count_matches(per_source, "\n") == 9);
}

TEST_CASE("classify command: three feature sets, deterministic reruns") {
    TempDir dir("cli_classify");
    FeatureTable table = synthetic_table(120, 11, 1.0);
    save_feature_table_csv(table, dir.file("features.csv"));

    std::string out = dir.file("out");
    REQUIRE(cli({"classify", "--table", dir.file("features.csv"), "--out", out, "--feature-sets",
                 "all", "--seed", "5"}) == 0);
    for (const char* name : {"topo", "texture", "both"}) {
        std::string set(name);
        CHECK(fs::exists(fs::path(out) / ("model_" + set + ".json")));
        CHECK(fs::exists(fs::path(out) / ("metrics_" + set + ".csv")));
        CHECK(fs::exists(fs::path(out) / ("metrics_" + set + ".json")));
        CHECK(fs::exists(fs::path(out) / ("roc_" + set + ".csv")));
        CHECK(fs::exists(fs::path(out) / ("selection_" + set + ".csv")));
    }
    std::string metrics = read_text_file(out + "/metrics_both.csv");
    CHECK(metrics.rfind("metric,train,test", 0) == 0);
    CHECK(count_matches(metrics, "\n") == 7); // header + six metric rows

    auto first = snapshot_tree(out);
    REQUIRE(cli({"classify", "--table", dir.file("features.csv"), "--out", out, "--feature-sets",
                 "all", "--seed", "5"}) == 0);
    CHECK(snapshot_tree(out) == first);
}

TEST_CASE("explain command: importance ranking and the logit identity") {
    TempDir dir("cli_explain");
    FeatureTable table = synthetic_table(120, 13, 1.2);
    save_feature_table_csv(table, dir.file("features.csv"));
    std::string fit_out = dir.file("fit");
    REQUIRE(cli({"classify", "--table", dir.file("features.csv"), "--out", fit_out, "--feature-sets",
                 "both", "--seed", "9"}) == 0);

    std::string out = dir.file("out");
    REQUIRE(cli({"explain", "--model", fit_out + "/model_both.json", "--table",
                 dir.file("features.csv"), "--out", out, "--rows", "0,3,5", "--seed", "9"}) == 0);

    std::string importance = read_text_file(out + "/importance.csv");
    CHECK(importance.rfind("feature,importance", 0) == 0);

    ClassifierModel model = load_model(fit_out + "/model_both.json");
    std::string contributions = read_text_file(out + "/contributions.csv");
    std::istringstream lines(contributions);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        REQUIRE(cells.size() == 4 + table.feature_names.size());
        double logit = parse_double(cells[1], "logit");
        double sum = parse_double(cells[3], "bias");
        for (size_t j = 4; j < cells.size(); ++j) sum += parse_double(cells[j], "contribution");
        // the file carries 9 significant digits; the exact identity is
        // covered in the learn tests
        CHECK(sum == doctest::Approx(logit).epsilon(1e-6));
    }

    CHECK(cli({"explain", "--model", fit_out + "/model_both.json", "--table",
               dir.file("features.csv"), "--out", dir.file("bad"), "--rows", "99999"}) == 1);
}

TEST_CASE("tda image command reproduces the ring barcode") {
    TempDir dir("cli_tda");
    write_text_file(dir.file("ring.csv"), "1,1,1\n1,9,1\n1,1,1\n");
    std::string out = dir.file("out");
    REQUIRE(cli({"tda", "image", "--in", dir.file("ring.csv"), "--out", out, "--generators"}) == 0);
    std::string barcode = read_text_file(out + "/barcode.csv");
    CHECK(barcode == "dim,birth,death,generator_vertices\n0,1,inf,0\n1,1,9,6\n");
    std::string generators = read_text_file(out + "/generators.txt");
    CHECK(generators == "\n0 1 3 5 7 8\n");
}

TEST_CASE("tda cloud command on the unit square") {
    TempDir dir("cli_cloud");
    write_text_file(dir.file("square.csv"), "x,y\n0,0\n0,1\n1,0\n1,1\n");
    std::string out = dir.file("out");
    REQUIRE(cli({"tda", "cloud", "--in", dir.file("square.csv"), "--t-max", "2.0", "--out", out}) ==
            0);
    std::string barcode = read_text_file(out + "/barcode.csv");
    CHECK(count_matches(barcode, "\n0,0,1,0") == 3);
    CHECK(barcode.find("0,0,inf,0") != std::string::npos);
    CHECK(barcode.find("1,1,1.41421356,4") != std::string::npos);
}

TEST_CASE("render command: bar counts, empty axes, perfect roc") {
    TempDir dir("cli_render");
    write_text_file(dir.file("barcode.csv"),
                    "dim,birth,death,generator_vertices\n0,0,inf,0\n0,0,1,0\n1,1,2,4\n");
    std::string out = dir.file("out");
    REQUIRE(cli({"render", "--kind", "barcode", "--in", dir.file("barcode.csv"), "--out", out}) ==
            0);
    std::string svg = read_text_file(out + "/barcode.svg");
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") !=
          std::string::npos);
    CHECK(count_matches(svg, "class=\"bar\"") == 3);

    write_text_file(dir.file("empty.csv"), "dim,birth,death,generator_vertices\n");
    REQUIRE(cli({"render", "--kind", "barcode", "--in", dir.file("empty.csv"), "--out",
                 dir.file("out_empty")}) == 0);
    std::string empty_svg = read_text_file(dir.file("out_empty") + "/barcode.svg");
    CHECK(count_matches(empty_svg, "class=\"bar\"") == 0);
    CHECK(empty_svg.find("<rect") != std::string::npos); // the axes frame

    write_text_file(dir.file("roc.csv"), "threshold,fpr,tpr\ninf,0,0\n0.9,0,1\n0.1,1,1\n");
    REQUIRE(cli({"render", "--kind", "roc", "--in", dir.file("roc.csv"), "--out",
                 dir.file("out_roc")}) == 0);
    std::string roc_svg = read_text_file(dir.file("out_roc") + "/roc.svg");
    CHECK(roc_svg.find("polyline") != std::string::npos);

    CHECK(cli({"render", "--kind", "nonsense", "--in", dir.file("roc.csv"), "--out",
               dir.file("out_bad")}) == 1);
}

TEST_CASE("simulate command: t_end 0 gives initial-frame-only outputs") {
    TempDir dir("cli_sim");
    std::string out = dir.file("out");
    REQUIRE(cli({"simulate", "--alpha", "0.5", "--t-end", "0", "--out", out, "--threads", "1"}) ==
            0);
    CHECK(fs::exists(fs::path(out) / "alpha_0.5" / "trajectory.csv"));
    CHECK(fs::exists(fs::path(out) / "alpha_0.5" / "clouds" / "frame_0.csv"));
    CHECK_FALSE(fs::exists(fs::path(out) / "alpha_0.5" / "clouds" / "frame_1.csv"));
    std::string summary = read_text_file(out + "/sweep_summary.csv");
    CHECK(summary == "alpha,onset_quiescent,onset_necrotic\n0.5,none,none\n");
    std::string series = read_text_file(out + "/alpha_0.5/topo_series.csv");
    CHECK(count_matches(series, "\n") == 4); // header + 3 type rows of frame 0
}

TEST_CASE("simulate divergence reports alpha and step") {
    // a reckless dt trips the stability guard up front
    TempDir dir("cli_div");
    CHECK(cli({"simulate", "--alpha", "0.5", "--dt", "0.5", "--out", dir.file("out")}) == 1);
}

TEST_CASE("config echo round trip reproduces outputs byte for byte") {
    TempDir dir("cli_echo");
    write_constant_pgm(dir.file("img.pgm"), 32, 9, 255);
    write_constant_pgm(dir.file("mask.pgm"), 32, 255, 255);
    write_text_file(dir.file("manifest.csv"), dir.file("img.pgm") + "," + dir.file("mask.pgm") +
                                                  ",pathologic,p1\n");
    std::string out_a = dir.file("a");
    REQUIRE(cli({"features", "--manifest", dir.file("manifest.csv"), "--out", out_a, "--size",
                 "16", "--stride", "8"}) == 0);

    // rerun purely from the echoed config, overriding only --out
    std::string out_b = dir.file("b");
    REQUIRE(cli({"--config", out_a + "/config.txt", "--out", out_b}) == 0);

    auto a = snapshot_tree(out_a);
    auto b = snapshot_tree(out_b);
    REQUIRE(a.size() == b.size());
    for (const auto& [name, content] : a) {
        REQUIRE(b.count(name) == 1);
        if (name == "config.txt") continue; // differs in the out= line only
        CHECK(b[name] == content);
    }
}
