#include "toporad/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "toporad/error.hpp"
#include "toporad/format.hpp"
#include "toporad/persistence.hpp"

namespace toporad {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kMarginLeft = 60, kMarginRight = 20, kMarginTop = 20, kMarginBottom = 40;

struct Canvas {
    std::ostringstream body;

    std::string finish() {
        std::ostringstream out;
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
            << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
            << "\">\n"
            << body.str() << "</svg>\n";
        return out.str();
    }

    void axes(const std::string& x_label, const std::string& y_label) {
        body << "<rect x=\"" << g9(kMarginLeft) << "\" y=\"" << g9(kMarginTop) << "\" width=\""
             << g9(kWidth - kMarginLeft - kMarginRight) << "\" height=\""
             << g9(kHeight - kMarginTop - kMarginBottom)
             << "\" fill=\"none\" stroke=\"black\"/>\n";
        body << "<text x=\"" << g9(kWidth / 2) << "\" y=\"" << g9(kHeight - 8)
             << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
        body << "<text x=\"14\" y=\"" << g9(kHeight / 2)
             << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
             << g9(kHeight / 2) << ")\">" << y_label << "</text>\n";
    }

    double sx(double t, double lo, double hi) const {
        double span = hi - lo;
        if (span <= 0) span = 1;
        return kMarginLeft + (t - lo) / span * (kWidth - kMarginLeft - kMarginRight);
    }
    double sy(double t, double lo, double hi) const {
        double span = hi - lo;
        if (span <= 0) span = 1;
        return kHeight - kMarginBottom - (t - lo) / span * (kHeight - kMarginTop - kMarginBottom);
    }
};

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != expected_header)
        throw IoError("expected header '" + expected_header + "' in " + path);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split(trim(line), ','));
    }
    return rows;
}

} // namespace

void render_barcode_svg(const std::string& barcode_csv, const std::string& out_path) {
    Barcode barcode = load_barcode_csv(barcode_csv);
    Canvas canvas;
    canvas.axes("filtration value", "intervals");

    double lo = 0, hi = 1;
    if (!barcode.intervals.empty()) {
        lo = barcode.intervals.front().birth;
        hi = lo;
        for (const Interval& i : barcode.intervals) {
            lo = std::min(lo, i.birth);
            hi = std::max(hi, i.unbounded() ? i.birth : i.death);
        }
        hi += 1; // room for the open-ended bars
    }
    // H0 block on top, H1 below, one bar per interval in barcode order
    std::vector<const Interval*> ordered;
    for (int dim = 0; dim <= 1; ++dim)
        for (const Interval& i : barcode.intervals)
            if (i.dim == dim) ordered.push_back(&i);
    double usable = kHeight - kMarginTop - kMarginBottom;
    double slot = ordered.empty() ? usable : usable / static_cast<double>(ordered.size());
    double bar = std::min(10.0, slot * 0.8);
    for (size_t k = 0; k < ordered.size(); ++k) {
        const Interval& interval = *ordered[k];
        double x0 = canvas.sx(interval.birth, lo, hi);
        double x1 = canvas.sx(interval.unbounded() ? hi : interval.death, lo, hi);
        double y = kMarginTop + slot * static_cast<double>(k) + (slot - bar) / 2;
        canvas.body << "<rect class=\"bar\" x=\"" << g9(x0) << "\" y=\"" << g9(y) << "\" width=\""
                    << g9(std::max(x1 - x0, 0.5)) << "\" height=\"" << g9(bar) << "\" fill=\""
                    << (interval.dim == 0 ? kPalette[0] : kPalette[1]) << "\"/>\n";
    }
    write_text_file(out_path, canvas.finish());
}

void render_diagram_svg(const std::string& barcode_csv, const std::string& out_path) {
    Barcode barcode = load_barcode_csv(barcode_csv);
    Canvas canvas;
    canvas.axes("birth", "death");
    double lo = 0, hi = 1;
    for (const Interval& i : barcode.intervals) {
        lo = std::min(lo, i.birth);
        hi = std::max(hi, i.unbounded() ? i.birth : i.death);
    }
    hi += 1;
    canvas.body << "<line x1=\"" << g9(canvas.sx(lo, lo, hi)) << "\" y1=\""
                << g9(canvas.sy(lo, lo, hi)) << "\" x2=\"" << g9(canvas.sx(hi, lo, hi))
                << "\" y2=\"" << g9(canvas.sy(hi, lo, hi))
                << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    for (const Interval& i : barcode.intervals) {
        double death = i.unbounded() ? hi : i.death;
        canvas.body << "<circle class=\"pt\" cx=\"" << g9(canvas.sx(i.birth, lo, hi)) << "\" cy=\""
                    << g9(canvas.sy(death, lo, hi)) << "\" r=\"3\" fill=\""
                    << (i.dim == 0 ? kPalette[0] : kPalette[1]) << "\"/>\n";
    }
    write_text_file(out_path, canvas.finish());
}

void render_roc_svg(const std::string& roc_csv, const std::string& out_path) {
    auto rows = read_csv(roc_csv, "threshold,fpr,tpr");
    Canvas canvas;
    canvas.axes("false positive rate", "true positive rate");
    canvas.body << "<line x1=\"" << g9(canvas.sx(0, 0, 1)) << "\" y1=\"" << g9(canvas.sy(0, 0, 1))
                << "\" x2=\"" << g9(canvas.sx(1, 0, 1)) << "\" y2=\"" << g9(canvas.sy(1, 0, 1))
                << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
    std::ostringstream points;
    for (const auto& row : rows) {
        if (row.size() != 3) throw IoError("roc row needs 3 columns: " + roc_csv);
        double fpr = parse_double(row[1], roc_csv), tpr = parse_double(row[2], roc_csv);
        points << g9(canvas.sx(fpr, 0, 1)) << "," << g9(canvas.sy(tpr, 0, 1)) << " ";
    }
    canvas.body << "<polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\""
                << kPalette[0] << "\" stroke-width=\"2\"/>\n";
    write_text_file(out_path, canvas.finish());
}

void render_timeseries_svg(const std::string& series_csv, const std::string& out_path) {
    auto rows = read_csv(series_csv, "frame,type,points,pe_h0,pe_h1,hgen");
    Canvas canvas;
    canvas.axes("frame", "entropy");
    double max_frame = 1, max_value = 1e-9;
    std::map<std::string, std::vector<std::array<double, 4>>> by_type;
    for (const auto& row : rows) {
        if (row.size() != 6) throw IoError("timeseries row needs 6 columns: " + series_csv);
        double frame = parse_double(row[0], series_csv);
        std::array<double, 4> v{frame, parse_double(row[3], series_csv),
                                parse_double(row[4], series_csv),
                                parse_double(row[5], series_csv)};
        by_type[trim(row[1])].push_back(v);
        max_frame = std::max(max_frame, frame);
        max_value = std::max({max_value, v[1], v[2], v[3]});
    }
    int color = 0;
    for (const auto& [type, series] : by_type) {
        for (int stat = 1; stat <= 3; ++stat) {
            std::ostringstream points;
            for (const auto& v : series)
                points << g9(canvas.sx(v[0], 0, max_frame)) << ","
                       << g9(canvas.sy(v[stat], 0, max_value)) << " ";
            canvas.body << "<polyline points=\"" << points.str()
                        << "\" fill=\"none\" stroke=\"" << kPalette[color % 8]
                        << "\" stroke-width=\"1.5\"/>\n";
            ++color;
        }
    }
    write_text_file(out_path, canvas.finish());
}

void render_onset_svg(const std::string& sweep_csv, const std::string& out_path) {
    auto rows = read_csv(sweep_csv, "alpha,onset_quiescent,onset_necrotic");
    Canvas canvas;
    canvas.axes("alpha", "onset frame");
    double max_onset = 1;
    std::vector<std::array<double, 3>> data;
    for (const auto& row : rows) {
        if (row.size() != 3) throw IoError("sweep row needs 3 columns: " + sweep_csv);
        std::array<double, 3> v{parse_double(row[0], sweep_csv), -1, -1};
        for (int k = 1; k <= 2; ++k) {
            if (trim(row[k]) == "none") continue;
            v[k] = parse_double(row[k], sweep_csv);
            max_onset = std::max(max_onset, v[k]);
        }
        data.push_back(v);
    }
    for (int k = 1; k <= 2; ++k) {
        std::ostringstream points;
        for (const auto& v : data) {
            if (v[k] < 0) continue;
            points << g9(canvas.sx(v[0], 0, 1)) << "," << g9(canvas.sy(v[k], 0, max_onset)) << " ";
        }
        canvas.body << "<polyline points=\"" << points.str() << "\" fill=\"none\" stroke=\""
                    << kPalette[k] << "\" stroke-width=\"2\"/>\n";
    }
    write_text_file(out_path, canvas.finish());
}

} // namespace toporad
