#include "toporad/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "toporad/error.hpp"
#include "toporad/format.hpp"

namespace toporad {

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.v < b.v;
}

uint64_t edge_key(uint32_t a, uint32_t b) { return (static_cast<uint64_t>(a) << 32) | b; }

double point_distance(const Point2& a, const Point2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

void finalize_complex(FilteredComplex& complex) {
    std::sort(complex.simplices.begin(), complex.simplices.end(), simplex_less);
    // face invariant: every face present with filtration value <= the coface's
    std::unordered_map<uint64_t, double> edge_value;
    std::vector<double> vertex_value(complex.vertex_count,
                                     std::numeric_limits<double>::quiet_NaN());
    edge_value.reserve(complex.simplices.size());
    for (const Simplex& s : complex.simplices) {
        switch (s.dim) {
        case 0:
            vertex_value[s.v[0]] = s.value;
            break;
        case 1: {
            for (int i = 0; i < 2; ++i) {
                double fv = s.v[i] < complex.vertex_count ? vertex_value[s.v[i]]
                                                          : std::numeric_limits<double>::quiet_NaN();
                if (!(fv <= s.value))
                    throw std::logic_error("filtration ordering violation: edge face missing or later");
            }
            if (s.v[0] >= s.v[1]) throw std::logic_error("edge vertices must be sorted and distinct");
            edge_value[edge_key(s.v[0], s.v[1])] = s.value;
            break;
        }
        case 2: {
            if (!(s.v[0] < s.v[1] && s.v[1] < s.v[2]))
                throw std::logic_error("triangle vertices must be sorted and distinct");
            const uint64_t faces[3] = {edge_key(s.v[0], s.v[1]), edge_key(s.v[0], s.v[2]),
                                       edge_key(s.v[1], s.v[2])};
            for (uint64_t key : faces) {
                auto it = edge_value.find(key);
                if (it == edge_value.end() || !(it->second <= s.value))
                    throw std::logic_error(
                        "filtration ordering violation: triangle face missing or later");
            }
            break;
        }
        default:
            throw std::logic_error("simplex dimension above 2");
        }
        complex.t_max = std::max(complex.t_max, s.value);
    }
}

FilteredComplex lower_star_filtration(const GrayImage& image) {
    if (image.pixel_count() == 0) throw Error("empty image");
    const int w = image.width, h = image.height;
    FilteredComplex complex;
    complex.vertex_count = static_cast<uint32_t>(image.pixel_count());
    complex.simplices.reserve(image.pixel_count() * 6);

    auto id = [w](int r, int c) { return static_cast<uint32_t>(r) * w + c; };
    auto val = [&image](int r, int c) { return static_cast<double>(image.at(r, c)); };

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            complex.simplices.push_back({{id(r, c), 0, 0}, 0, val(r, c)});
            if (c + 1 < w)
                complex.simplices.push_back(
                    {{id(r, c), id(r, c + 1), 0}, 1, std::max(val(r, c), val(r, c + 1))});
            if (r + 1 < h)
                complex.simplices.push_back(
                    {{id(r, c), id(r + 1, c), 0}, 1, std::max(val(r, c), val(r + 1, c))});
            if (r + 1 < h && c + 1 < w) {
                // unit square split by its top-left -> bottom-right diagonal
                double diag = std::max(val(r, c), val(r + 1, c + 1));
                complex.simplices.push_back({{id(r, c), id(r + 1, c + 1), 0}, 1, diag});
                double tri1 = std::max(diag, val(r, c + 1));
                double tri2 = std::max(diag, val(r + 1, c));
                std::array<uint32_t, 3> t1{id(r, c), id(r, c + 1), id(r + 1, c + 1)};
                std::array<uint32_t, 3> t2{id(r, c), id(r + 1, c), id(r + 1, c + 1)};
                std::sort(t1.begin(), t1.end());
                std::sort(t2.begin(), t2.end());
                complex.simplices.push_back({t1, 2, tri1});
                complex.simplices.push_back({t2, 2, tri2});
            }
        }
    }
    finalize_complex(complex);
    return complex;
}

FilteredComplex rips_filtration(const PointCloud2D& cloud, double t_max, size_t max_points) {
    if (cloud.empty()) throw Error("empty point cloud");
    if (!(t_max > 0)) throw Error("rips t_max must be positive");
    if (cloud.size() > max_points)
        throw SizeCapError("point cloud of " + std::to_string(cloud.size()) +
                           " points exceeds the cap of " + std::to_string(max_points));
    for (const Point2& p : cloud.points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("non-finite point coordinate");

    const uint32_t n = static_cast<uint32_t>(cloud.size());
    FilteredComplex complex;
    complex.vertex_count = n;
    for (uint32_t i = 0; i < n; ++i) complex.simplices.push_back({{i, 0, 0}, 0, 0.0});

    // bucket points on a grid of cell size t_max; candidate pairs live in
    // neighboring cells
    std::unordered_map<uint64_t, std::vector<uint32_t>> grid;
    auto cell_of = [&](const Point2& p) {
        auto cx = static_cast<int64_t>(std::floor(p.x / t_max));
        auto cy = static_cast<int64_t>(std::floor(p.y / t_max));
        return std::pair<int64_t, int64_t>(cx, cy);
    };
    auto cell_key = [](int64_t cx, int64_t cy) {
        return (static_cast<uint64_t>(cx + 0x40000000LL) << 32) |
               static_cast<uint64_t>(cy + 0x40000000LL);
    };
    for (uint32_t i = 0; i < n; ++i) {
        auto [cx, cy] = cell_of(cloud.points[i]);
        grid[cell_key(cx, cy)].push_back(i);
    }

    std::vector<std::vector<uint32_t>> adjacency(n);
    std::unordered_map<uint64_t, double> edge_length;
    for (uint32_t i = 0; i < n; ++i) {
        auto [cx, cy] = cell_of(cloud.points[i]);
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = grid.find(cell_key(cx + dx, cy + dy));
                if (it == grid.end()) continue;
                for (uint32_t j : it->second) {
                    if (j <= i) continue;
                    double d = point_distance(cloud.points[i], cloud.points[j]);
                    if (d > t_max) continue;
                    complex.simplices.push_back({{i, j, 0}, 1, d});
                    adjacency[i].push_back(j);
                    adjacency[j].push_back(i);
                    edge_length[edge_key(i, j)] = d;
                }
            }
        }
    }
    for (auto& neighbors : adjacency) std::sort(neighbors.begin(), neighbors.end());

    auto length_of = [&edge_length](uint32_t a, uint32_t b) {
        return edge_length.find(edge_key(a, b))->second;
    };
    std::vector<uint32_t> common;
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j : adjacency[i]) {
            if (j <= i) continue;
            common.clear();
            std::set_intersection(adjacency[i].begin(), adjacency[i].end(), adjacency[j].begin(),
                                  adjacency[j].end(), std::back_inserter(common));
            double dij = length_of(i, j);
            for (uint32_t k : common) {
                if (k <= j) continue;
                double value = std::max({dij, length_of(i, k), length_of(j, k)});
                complex.simplices.push_back({{i, j, k}, 2, value});
            }
        }
    }

    finalize_complex(complex);
    complex.t_max = t_max; // K(t_max) == K by construction
    return complex;
}

} // namespace toporad
