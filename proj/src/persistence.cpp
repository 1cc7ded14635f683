#include "toporad/persistence.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "toporad/error.hpp"
#include "toporad/format.hpp"

namespace toporad {

namespace {

uint64_t edge_key(uint32_t a, uint32_t b) { return (static_cast<uint64_t>(a) << 32) | b; }

// xor-merge of two ascending index lists (Z/2 column addition)
void add_column(std::vector<uint32_t>& target, const std::vector<uint32_t>& other,
                std::vector<uint32_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

struct DisjointSet {
    std::vector<uint32_t> parent;
    std::vector<uint32_t> rank;

    explicit DisjointSet(size_t n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    uint32_t find(uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    bool unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
        return true;
    }
};

std::vector<uint32_t> distinct_vertices_of_edges(const std::vector<uint32_t>& edge_indices,
                                                 const std::vector<Simplex>& simplices) {
    std::vector<uint32_t> vertices;
    vertices.reserve(edge_indices.size() * 2);
    for (uint32_t e : edge_indices) {
        vertices.push_back(simplices[e].v[0]);
        vertices.push_back(simplices[e].v[1]);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

} // namespace

long Barcode::count(int dim) const {
    return std::count_if(intervals.begin(), intervals.end(),
                         [dim](const Interval& i) { return i.dim == dim; });
}

Barcode compute_persistence(const FilteredComplex& complex) {
    const std::vector<Simplex>& simplices = complex.simplices;
    const size_t m = simplices.size();

    // verify the deterministic total order and index the faces
    std::vector<uint32_t> vertex_index(complex.vertex_count, UINT32_MAX);
    std::unordered_map<uint64_t, uint32_t> edge_index;
    edge_index.reserve(m);
    for (size_t g = 1; g < m; ++g) {
        const Simplex& a = simplices[g - 1];
        const Simplex& b = simplices[g];
        bool ordered = a.value < b.value ||
                       (a.value == b.value && (a.dim < b.dim || (a.dim == b.dim && a.v < b.v)));
        if (!ordered) throw std::logic_error("complex is not in the canonical filtration order");
    }
    for (size_t g = 0; g < m; ++g) {
        const Simplex& s = simplices[g];
        if (s.dim == 0) {
            if (s.v[0] >= complex.vertex_count)
                throw std::logic_error("vertex id out of range");
            vertex_index[s.v[0]] = static_cast<uint32_t>(g);
        } else if (s.dim == 1) {
            edge_index[edge_key(s.v[0], s.v[1])] = static_cast<uint32_t>(g);
        }
    }
    auto face_edge = [&](uint32_t a, uint32_t b) {
        auto it = edge_index.find(edge_key(a, b));
        if (it == edge_index.end())
            throw std::logic_error("filtration ordering violation: missing edge face");
        return it->second;
    };

    // dense per-dimension ordinals keep the hot reduction loops off hash maps
    std::vector<uint32_t> ordinal(m, UINT32_MAX);
    std::vector<uint32_t> edge_gidx, triangle_gidx;
    for (size_t g = 0; g < m; ++g) {
        if (simplices[g].dim == 1) {
            ordinal[g] = static_cast<uint32_t>(edge_gidx.size());
            edge_gidx.push_back(static_cast<uint32_t>(g));
        } else if (simplices[g].dim == 2) {
            ordinal[g] = static_cast<uint32_t>(triangle_gidx.size());
            triangle_gidx.push_back(static_cast<uint32_t>(g));
        }
    }

    // phase 1: triangle columns over edge rows. Lows identify the edges
    // whose H1 class dies; the surviving reduced column is that class's
    // death-time cycle.
    std::vector<uint32_t> pivot_owner(m, UINT32_MAX); // edge gidx -> triangle gidx
    std::vector<std::vector<uint32_t>> reduced_triangle(triangle_gidx.size());
    std::vector<uint32_t> scratch;
    for (uint32_t g : triangle_gidx) {
        const Simplex& s = simplices[g];
        std::vector<uint32_t> column = {face_edge(s.v[0], s.v[1]), face_edge(s.v[0], s.v[2]),
                                        face_edge(s.v[1], s.v[2])};
        std::sort(column.begin(), column.end());
        while (!column.empty()) {
            uint32_t owner = pivot_owner[column.back()];
            if (owner == UINT32_MAX) break;
            add_column(column, reduced_triangle[ordinal[owner]], scratch);
        }
        if (!column.empty()) {
            pivot_owner[column.back()] = g;
            reduced_triangle[ordinal[g]] = std::move(column);
        }
        // a zero column would create an H2 class; out of tracked range
    }

    // phase 2: edge columns over vertex rows, with clearing: edges already
    // claimed as a triangle pivot reduce to zero and are skipped. The
    // transformation column V is kept for the essential H1 generators.
    std::vector<uint32_t> vertex_pivot_owner(m, UINT32_MAX); // vertex gidx -> edge gidx
    std::vector<std::vector<uint32_t>> reduced_edge(edge_gidx.size());
    std::vector<std::vector<uint32_t>> transformation(edge_gidx.size());
    std::vector<uint32_t> essential_edges;
    for (uint32_t g : edge_gidx) {
        const Simplex& s = simplices[g];
        if (pivot_owner[g] != UINT32_MAX) continue; // cleared: dies with its triangle
        std::vector<uint32_t> column = {vertex_index[s.v[0]], vertex_index[s.v[1]]};
        std::sort(column.begin(), column.end());
        std::vector<uint32_t> chain = {g};
        while (!column.empty()) {
            uint32_t owner = vertex_pivot_owner[column.back()];
            if (owner == UINT32_MAX) break;
            add_column(column, reduced_edge[ordinal[owner]], scratch);
            add_column(chain, transformation[ordinal[owner]], scratch);
        }
        if (column.empty()) {
            essential_edges.push_back(g);
            transformation[ordinal[g]] = std::move(chain);
        } else {
            vertex_pivot_owner[column.back()] = g;
            reduced_edge[ordinal[g]] = std::move(column);
            transformation[ordinal[g]] = std::move(chain);
        }
    }

    Barcode barcode;
    barcode.t_max = complex.t_max;

    // H0: every vertex is a birth; the edge owning its pivot kills it
    std::vector<uint32_t> killer_of_vertex(m, UINT32_MAX);
    for (size_t g = 0; g < m; ++g)
        if (simplices[g].dim == 0 && vertex_pivot_owner[g] != UINT32_MAX)
            killer_of_vertex[g] = vertex_pivot_owner[g];
    for (size_t g = 0; g < m; ++g) {
        if (simplices[g].dim != 0) continue;
        Interval interval;
        interval.dim = 0;
        interval.birth = simplices[g].value;
        if (killer_of_vertex[g] != UINT32_MAX) {
            interval.death = simplices[killer_of_vertex[g]].value;
            if (interval.death == interval.birth) continue; // zero persistence
        }
        barcode.intervals.push_back(std::move(interval));
    }

    // H1 finite: (creating edge, killing triangle) pairs from phase 1
    for (size_t g = 0; g < m; ++g) {
        if (simplices[g].dim != 1 || pivot_owner[g] == UINT32_MAX) continue;
        uint32_t triangle = pivot_owner[g];
        Interval interval;
        interval.dim = 1;
        interval.birth = simplices[g].value;
        interval.death = simplices[triangle].value;
        if (interval.death == interval.birth) continue;
        interval.generator =
            distinct_vertices_of_edges(reduced_triangle[ordinal[triangle]], simplices);
        barcode.intervals.push_back(std::move(interval));
    }

    // H1 essential: edges whose column vanished in phase 2
    for (uint32_t g : essential_edges) {
        Interval interval;
        interval.dim = 1;
        interval.birth = simplices[g].value;
        interval.generator = distinct_vertices_of_edges(transformation[ordinal[g]], simplices);
        barcode.intervals.push_back(std::move(interval));
    }

    std::stable_sort(barcode.intervals.begin(), barcode.intervals.end(),
                     [](const Interval& a, const Interval& b) {
                         if (a.dim != b.dim) return a.dim < b.dim;
                         if (a.birth != b.birth) return a.birth < b.birth;
                         return a.death < b.death;
                     });
    return barcode;
}

std::vector<long> betti_curve(const Barcode& barcode, int dim,
                              const std::vector<double>& thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("thresholds must be sorted ascending");
    std::vector<long> counts(thresholds.size(), 0);
    for (const Interval& interval : barcode.intervals) {
        if (interval.dim != dim) continue;
        for (size_t i = 0; i < thresholds.size(); ++i) {
            double t = thresholds[i];
            if (interval.birth <= t && t < interval.death) ++counts[i];
        }
    }
    return counts;
}

std::pair<long, long> brute_force_betti(const FilteredComplex& complex, double t,
                                        size_t max_simplices) {
    if (complex.size() > max_simplices)
        throw SizeCapError("complex of " + std::to_string(complex.size()) +
                           " simplices exceeds the oracle cap of " +
                           std::to_string(max_simplices));

    std::vector<uint32_t> vertices;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    std::vector<std::array<uint32_t, 3>> triangles;
    for (const Simplex& s : complex.simplices) {
        if (s.value > t) continue;
        if (s.dim == 0)
            vertices.push_back(s.v[0]);
        else if (s.dim == 1)
            edges.push_back({s.v[0], s.v[1]});
        else
            triangles.push_back(s.v);
    }
    if (vertices.empty()) return {0, 0};

    // beta0 by union-find over the present 1-skeleton
    std::unordered_map<uint32_t, uint32_t> local;
    local.reserve(vertices.size());
    for (uint32_t v : vertices) local.emplace(v, static_cast<uint32_t>(local.size()));
    DisjointSet components(vertices.size());
    for (auto [a, b] : edges) components.unite(local.at(a), local.at(b));
    long beta0 = 0;
    for (uint32_t i = 0; i < vertices.size(); ++i)
        if (components.find(i) == i) ++beta0;

    // rank of the triangle boundary over GF(2); on planar complexes this is
    // just the triangle count, for Rips complexes it also discounts 2-cycles
    std::unordered_map<uint64_t, uint32_t> edge_local;
    edge_local.reserve(edges.size());
    for (const auto& [a, b] : edges)
        edge_local.emplace(edge_key(a, b), static_cast<uint32_t>(edge_local.size()));
    std::vector<std::vector<uint32_t>> pivot_column(edges.size());
    std::vector<uint8_t> pivot_used(edges.size(), 0);
    std::vector<uint32_t> scratch;
    long rank2 = 0;
    for (const auto& tri : triangles) {
        std::vector<uint32_t> column = {edge_local.at(edge_key(tri[0], tri[1])),
                                        edge_local.at(edge_key(tri[0], tri[2])),
                                        edge_local.at(edge_key(tri[1], tri[2]))};
        std::sort(column.begin(), column.end());
        while (!column.empty() && pivot_used[column.back()])
            add_column(column, pivot_column[column.back()], scratch);
        if (!column.empty()) {
            ++rank2;
            pivot_used[column.back()] = 1;
            pivot_column[column.back()] = std::move(column);
        }
    }

    long rank1 = static_cast<long>(vertices.size()) - beta0;
    long beta1 = static_cast<long>(edges.size()) - rank1 - rank2;
    return {beta0, beta1};
}

void save_barcode_csv(const Barcode& barcode, const std::string& path) {
    std::ostringstream out;
    out << "dim,birth,death,generator_vertices\n";
    for (const Interval& interval : barcode.intervals) {
        out << interval.dim << "," << g9(interval.birth) << "," << g9(interval.death) << ","
            << interval.generator.size() << "\n";
    }
    write_text_file(path, out.str());
}

void save_generators(const Barcode& barcode, const std::string& path) {
    std::ostringstream out;
    for (const Interval& interval : barcode.intervals) {
        for (size_t i = 0; i < interval.generator.size(); ++i)
            out << (i ? " " : "") << interval.generator[i];
        out << "\n";
    }
    write_text_file(path, out.str());
}

Barcode load_barcode_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "dim,birth,death,generator_vertices")
        throw IoError("not a barcode CSV: " + path);
    Barcode barcode;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split(line, ',');
        if (cells.size() != 4) throw IoError("barcode row needs 4 columns: " + path);
        Interval interval;
        interval.dim = static_cast<int>(parse_long(cells[0], path));
        interval.birth = parse_double(cells[1], path);
        interval.death = parse_double(cells[2], path);
        // the CSV carries only the generator cardinality
        interval.generator.assign(static_cast<size_t>(parse_long(cells[3], path)), 0);
        if (interval.death != kUnbounded) barcode.t_max = std::max(barcode.t_max, interval.death);
        barcode.t_max = std::max(barcode.t_max, interval.birth);
        barcode.intervals.push_back(std::move(interval));
    }
    return barcode;
}

} // namespace toporad
