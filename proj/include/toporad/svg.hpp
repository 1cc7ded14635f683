#pragma once

#include <string>

namespace toporad {

/// Deterministic SVG 1.1 renderers over the toolkit's CSV artifacts.
/// Barcodes draw one horizontal bar per interval grouped by dimension;
/// diagrams draw birth/death points against the diagonal; roc and
/// timeseries draw polylines.
void render_barcode_svg(const std::string& barcode_csv, const std::string& out_path);
void render_diagram_svg(const std::string& barcode_csv, const std::string& out_path);
void render_roc_svg(const std::string& roc_csv, const std::string& out_path);
void render_timeseries_svg(const std::string& series_csv, const std::string& out_path);
void render_onset_svg(const std::string& sweep_csv, const std::string& out_path);

} // namespace toporad
