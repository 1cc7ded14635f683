#pragma once

#include <array>
#include <string>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

inline const std::vector<std::string>& all_feature_names() {
    static const std::vector<std::string> names = {"euler",    "pe_h0",       "pe_h1",
                                                   "hgen",     "contrast",    "correlation",
                                                   "homogeneity", "energy"};
    return names;
}
inline const std::vector<std::string>& topo_feature_names() {
    static const std::vector<std::string> names = {"euler", "pe_h0", "pe_h1", "hgen"};
    return names;
}
inline const std::vector<std::string>& texture_feature_names() {
    static const std::vector<std::string> names = {"contrast", "correlation", "homogeneity",
                                                   "energy"};
    return names;
}

/// Per-patch feature rows with labels and provenance. The CSV schema is
/// source_id,row,col,label,<feature columns>.
struct FeatureTable {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels; // pathologic = 1, healthy = 0
    std::vector<std::string> source_ids;
    std::vector<std::array<int, 2>> origins;

    size_t size() const { return rows.size(); }
    std::vector<double> column(size_t feature) const;
    int feature_index(const std::string& name) const; // -1 when absent
    FeatureTable select_rows(const std::vector<size_t>& indices) const;
    FeatureTable select_features(const std::vector<std::string>& names) const;
};

void save_feature_table_csv(const FeatureTable& table, const std::string& path);
FeatureTable load_feature_table_csv(const std::string& path);

} // namespace toporad
