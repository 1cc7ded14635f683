#include "toporad/table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "toporad/error.hpp"
#include "toporad/format.hpp"

namespace toporad {

std::vector<double> FeatureTable::column(size_t feature) const {
    std::vector<double> out(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][feature];
    return out;
}

int FeatureTable::feature_index(const std::string& name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    return it == feature_names.end() ? -1 : static_cast<int>(it - feature_names.begin());
}

FeatureTable FeatureTable::select_rows(const std::vector<size_t>& indices) const {
    FeatureTable out;
    out.feature_names = feature_names;
    for (size_t i : indices) {
        out.rows.push_back(rows.at(i));
        if (!labels.empty()) out.labels.push_back(labels.at(i));
        if (!source_ids.empty()) out.source_ids.push_back(source_ids.at(i));
        if (!origins.empty()) out.origins.push_back(origins.at(i));
    }
    return out;
}

FeatureTable FeatureTable::select_features(const std::vector<std::string>& names) const {
    FeatureTable out;
    out.labels = labels;
    out.source_ids = source_ids;
    out.origins = origins;
    std::vector<size_t> picks;
    for (const std::string& name : names) {
        int j = feature_index(name);
        if (j < 0) throw Error("feature table has no column '" + name + "'");
        picks.push_back(static_cast<size_t>(j));
        out.feature_names.push_back(name);
    }
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> r;
        r.reserve(picks.size());
        for (size_t j : picks) r.push_back(row[j]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

void save_feature_table_csv(const FeatureTable& table, const std::string& path) {
    std::ostringstream out;
    out << "source_id,row,col,label";
    for (const std::string& name : table.feature_names) out << "," << name;
    out << "\n";
    for (size_t i = 0; i < table.rows.size(); ++i) {
        out << (i < table.source_ids.size() ? table.source_ids[i] : "") << ",";
        if (i < table.origins.size())
            out << table.origins[i][0] << "," << table.origins[i][1];
        else
            out << "0,0";
        out << ","
            << (i < table.labels.size()
                    ? to_string(table.labels[i] ? TissueLabel::pathologic : TissueLabel::healthy)
                    : "healthy");
        for (double v : table.rows[i]) out << "," << g9(v);
        out << "\n";
    }
    write_text_file(path, out.str());
}

FeatureTable load_feature_table_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty feature table: " + path);
    std::vector<std::string> header = split(trim(line), ',');
    if (header.size() < 5 || header[0] != "source_id" || header[1] != "row" ||
        header[2] != "col" || header[3] != "label")
        throw IoError("feature table must start with source_id,row,col,label: " + path);

    FeatureTable table;
    table.feature_names.assign(header.begin() + 4, header.end());
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (cells.size() != header.size())
            throw IoError("feature row width mismatch in " + path);
        table.source_ids.push_back(trim(cells[0]));
        table.origins.push_back({static_cast<int>(parse_long(cells[1], path)),
                                 static_cast<int>(parse_long(cells[2], path))});
        table.labels.push_back(label_from_string(trim(cells[3])) == TissueLabel::pathologic);
        std::vector<double> row;
        row.reserve(table.feature_names.size());
        for (size_t j = 4; j < cells.size(); ++j) row.push_back(parse_double(cells[j], path));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace toporad
