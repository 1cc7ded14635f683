#include "toporad/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "toporad/format.hpp"

namespace toporad {

namespace {

// Next whitespace-separated token of a PGM header, skipping '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c = 0;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!token.empty()) break;
            continue;
        }
        token.push_back(static_cast<char>(c));
    }
    return token;
}

long pgm_header_number(std::istream& in, const std::string& path, const char* what) {
    std::string token = next_pgm_token(in);
    if (token.empty()) throw IoError("malformed PGM header (missing " + std::string(what) + "): " + path);
    for (char ch : token)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw IoError("malformed PGM header (bad " + std::string(what) + " '" + token + "'): " + path);
    return std::stol(token);
}

GrayImage load_pgm(std::ifstream& in, const std::string& path, bool binary) {
    long width = pgm_header_number(in, path, "width");
    long height = pgm_header_number(in, path, "height");
    long maxval = pgm_header_number(in, path, "maxval");
    if (width < 1 || height < 1) throw IoError("malformed PGM header (non-positive size): " + path);
    if (maxval < 1 || maxval > 65535)
        throw IoError("malformed PGM header (maxval out of range): " + path);

    size_t count = static_cast<size_t>(width) * static_cast<size_t>(height);
    std::vector<uint16_t> values(count);
    if (binary) {
        // header ends at the single whitespace byte already consumed
        const bool wide = maxval > 255;
        std::vector<unsigned char> raw(count * (wide ? 2 : 1));
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<size_t>(in.gcount()) != raw.size())
            throw IoError("truncated PGM pixel data: " + path);
        for (size_t i = 0; i < count; ++i) {
            values[i] = wide ? static_cast<uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1])
                             : static_cast<uint16_t>(raw[i]);
        }
    } else {
        for (size_t i = 0; i < count; ++i) {
            std::string token = next_pgm_token(in);
            if (token.empty()) throw IoError("truncated PGM pixel data: " + path);
            values[i] = static_cast<uint16_t>(parse_long(token, "PGM pixel in " + path));
        }
    }
    for (uint16_t v : values)
        if (v > maxval) throw IoError("intensity above declared maximum in " + path);
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(values),
                     static_cast<int>(maxval));
}

GrayImage load_csv_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<uint16_t> values;
    std::string line;
    long width = -1, height = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (width < 0)
            width = static_cast<long>(cells.size());
        else if (static_cast<long>(cells.size()) != width)
            throw IoError("ragged CSV rows in " + path);
        for (const std::string& cell : cells) {
            long v = parse_long(cell, "CSV cell in " + path);
            if (v < 0 || v > 65535) throw IoError("intensity out of [0, 65535] in " + path);
            values.push_back(static_cast<uint16_t>(v));
        }
        ++height;
    }
    if (height == 0) throw IoError("empty CSV grid: " + path);
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

} // namespace

GrayImage load_grayscale(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() == 2 && magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5'))
        return load_pgm(in, path, magic[1] == '5');
    in.close();
    return load_csv_grid(path);
}

void save_pgm(const GrayImage& image, const std::string& path, bool binary) {
    std::ostringstream out;
    out << (binary ? "P5" : "P2") << "\n"
        << image.width << " " << image.height << "\n"
        << image.maxval << "\n";
    if (binary) {
        const bool wide = image.maxval > 255;
        for (uint16_t v : image.values) {
            if (wide) out.put(static_cast<char>(v >> 8));
            out.put(static_cast<char>(v & 0xff));
        }
    } else {
        for (int r = 0; r < image.height; ++r) {
            for (int c = 0; c < image.width; ++c) {
                out << image.at(r, c) << (c + 1 == image.width ? "" : " ");
            }
            out << "\n";
        }
    }
    write_text_file(path, out.str());
}

void save_csv_grid(const GrayImage& image, const std::string& path) {
    std::ostringstream out;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            out << image.at(r, c) << (c + 1 == image.width ? "" : ",");
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

RoiMask load_mask(const std::string& path, TissueLabel label) {
    GrayImage raster = load_grayscale(path);
    RoiMask mask;
    mask.width = raster.width;
    mask.height = raster.height;
    mask.label = label;
    mask.membership.resize(raster.pixel_count());
    for (size_t i = 0; i < raster.pixel_count(); ++i) mask.membership[i] = raster.values[i] > 0;
    if (mask.member_count() == 0) throw IoError("all-zero mask: " + path);
    return mask;
}

PointCloud2D load_point_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,y")
        throw IoError("point-cloud CSV must start with header 'x,y': " + path);
    PointCloud2D cloud;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 2) throw IoError("point-cloud row needs two columns in " + path);
        Point2 p{parse_double(cells[0], path), parse_double(cells[1], path)};
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw IoError("non-finite coordinate in " + path);
        cloud.points.push_back(p);
    }
    return cloud;
}

void save_point_cloud(const PointCloud2D& cloud, const std::string& path) {
    std::ostringstream out;
    out << "x,y\n";
    for (const Point2& p : cloud.points) out << g9(p.x) << "," << g9(p.y) << "\n";
    write_text_file(path, out.str());
}

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (first && t == "image_path,mask_path,label,source_id") {
            first = false;
            continue;
        }
        first = false;
        std::vector<std::string> cells = split(t, ',');
        if (cells.size() != 4)
            throw IoError("manifest line needs image_path,mask_path,label,source_id: " + t);
        ManifestEntry e;
        e.image_path = trim(cells[0]);
        e.mask_path = trim(cells[1]);
        e.label = label_from_string(trim(cells[2]));
        e.source_id = trim(cells[3]);
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace toporad
