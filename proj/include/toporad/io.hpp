#pragma once

#include <string>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

/// Loads a grayscale raster. The format is sniffed from content:
/// a leading "P2"/"P5" token means PGM (8- or 16-bit, maxval <= 65535),
/// anything else is parsed as a comma-separated numeric grid.
GrayImage load_grayscale(const std::string& path);

/// Writes binary PGM (P5); 16-bit samples are big-endian per the format.
void save_pgm(const GrayImage& image, const std::string& path, bool binary = true);

/// Writes a comma-separated numeric grid, one image row per line.
void save_csv_grid(const GrayImage& image, const std::string& path);

/// Loads a mask from the same raster formats; any value > 0 is a member.
/// Rejects all-zero masks.
RoiMask load_mask(const std::string& path, TissueLabel label);

/// Point-cloud CSV with header "x,y".
PointCloud2D load_point_cloud(const std::string& path);
void save_point_cloud(const PointCloud2D& cloud, const std::string& path);

struct ManifestEntry {
    std::string image_path;
    std::string mask_path;
    TissueLabel label = TissueLabel::healthy;
    std::string source_id;
};

/// Manifest: one "image_path,mask_path,label,source_id" line per item.
/// Blank lines and '#' comments are skipped; an optional header line equal
/// to the column names is tolerated.
std::vector<ManifestEntry> load_manifest(const std::string& path);

} // namespace toporad
