#include "toporad/growth.hpp"

#include <cmath>

#include "toporad/complex.hpp"
#include "toporad/error.hpp"
#include "toporad/format.hpp"
#include "toporad/persistence.hpp"
#include "toporad/topo_stats.hpp"

namespace toporad {

namespace {
constexpr double kVacuum = 1e-12;     // p+q below this carries no flux
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kGoldenAngle = 2.399963; // ring-to-ring angular offset
} // namespace

const char* to_string(CellType type) {
    switch (type) {
    case CellType::proliferative: return "proliferative";
    case CellType::quiescent: return "quiescent";
    default: return "necrotic";
    }
}

void GrowthParams::validate() const {
    if (!(alpha >= 0 && alpha <= 1)) throw Error("alpha must lie in [0, 1]");
    if (!(gamma > 0) || !(beta > 0) || !(c0 > 0) || !(dx > 0) || !(dt > 0) || !(t_end >= 0))
        throw Error("growth parameters must be positive");
    if (n_nodes < 2) throw Error("need at least 2 grid nodes");
    if (dt > dx * dx / 2 + 1e-15)
        throw Error("stability guard violated: dt must satisfy dt <= dx^2/2 (dt=" + g9(dt) +
                    ", dx=" + g9(dx) + ")");
}

long GrowthParams::total_steps() const { return std::lround(t_end / dt); }

ReactionTerms reaction_terms(double c, double beta) {
    ReactionTerms terms;
    terms.f = (1.0 - std::tanh(4.0 * c - 2.0)) / 2.0;
    terms.g = beta * std::exp(beta * c);
    terms.h = terms.f / 2.0;
    return terms;
}

std::vector<double> nutrient(const std::vector<double>& p, const std::vector<double>& q,
                             const std::vector<double>& n, const GrowthParams& params) {
    std::vector<double> c(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        c[i] = params.c0 * params.gamma / (params.gamma + p[i]) *
               (1.0 - params.alpha * (p[i] + q[i] + n[i]));
    }
    return c;
}

GrowthState initial_state(const GrowthParams& params) {
    const double eps = 0.5;
    GrowthState state;
    state.x.resize(params.n_nodes);
    state.proliferative.resize(params.n_nodes);
    state.quiescent.assign(params.n_nodes, 0.0);
    state.necrotic.assign(params.n_nodes, 0.0);
    for (int i = 0; i < params.n_nodes; ++i) {
        state.x[i] = i * params.dx;
        double r = state.x[i] / eps;
        state.proliferative[i] = std::exp(-r * r);
    }
    state.nutrient = nutrient(state.proliferative, state.quiescent, state.necrotic, params);
    state.step = 0;
    return state;
}

GrowthState growth_step(const GrowthState& state, const GrowthParams& params) {
    params.validate();
    const size_t n = state.x.size();
    const std::vector<double>& p = state.proliferative;
    const std::vector<double>& q = state.quiescent;
    const std::vector<double>& w_n = state.necrotic;

    std::vector<double> c = nutrient(p, q, w_n, params);

    // competitive diffusion: species flux (u/(p+q)) * d(p+q)/dx at half
    // nodes, zero-flux boundaries, vacuum guarded
    std::vector<double> total(n), ratio_p(n), ratio_q(n);
    for (size_t i = 0; i < n; ++i) {
        total[i] = p[i] + q[i];
        if (total[i] < kVacuum) {
            ratio_p[i] = 0;
            ratio_q[i] = 0;
        } else {
            ratio_p[i] = p[i] / total[i];
            ratio_q[i] = q[i] / total[i];
        }
    }
    std::vector<double> flux_p(n + 1, 0.0), flux_q(n + 1, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        double gradient = (total[i + 1] - total[i]) / params.dx;
        flux_p[i + 1] = 0.5 * (ratio_p[i] + ratio_p[i + 1]) * gradient;
        flux_q[i + 1] = 0.5 * (ratio_q[i] + ratio_q[i + 1]) * gradient;
    }

    GrowthState next;
    next.x = state.x;
    next.proliferative.resize(n);
    next.quiescent.resize(n);
    next.necrotic.resize(n);
    next.step = state.step + 1;
    next.clamped = state.clamped;

    for (size_t i = 0; i < n; ++i) {
        ReactionTerms terms = reaction_terms(c[i], params.beta);
        double diff_p = (flux_p[i + 1] - flux_p[i]) / params.dx;
        double diff_q = (flux_q[i + 1] - flux_q[i]) / params.dx;
        double dp = diff_p + terms.g * p[i] * (1.0 - p[i] - q[i] - w_n[i]) - terms.f * p[i];
        double dq = diff_q + terms.f * p[i] - terms.h * q[i];
        double dn = terms.h * q[i];
        next.proliferative[i] = p[i] + params.dt * dp;
        next.quiescent[i] = q[i] + params.dt * dq;
        next.necrotic[i] = w_n[i] + params.dt * dn;
        if (next.proliferative[i] < 0) {
            next.proliferative[i] = 0;
            ++next.clamped;
        }
        if (next.quiescent[i] < 0) {
            next.quiescent[i] = 0;
            ++next.clamped;
        }
        if (!std::isfinite(next.proliferative[i]) || !std::isfinite(next.quiescent[i]) ||
            !std::isfinite(next.necrotic[i]))
            throw Error("growth model diverged at step " + std::to_string(next.step));
    }
    next.nutrient = nutrient(next.proliferative, next.quiescent, next.necrotic, params);
    return next;
}

std::vector<GrowthState> simulate(const GrowthParams& params, long sample_every) {
    params.validate();
    if (sample_every < 1) throw Error("sample_every must be at least 1");
    const long steps = params.total_steps();
    std::vector<GrowthState> frames;
    frames.reserve(static_cast<size_t>(steps / sample_every) + 1);
    GrowthState state = initial_state(params);
    frames.push_back(state);
    for (long s = 1; s <= steps; ++s) {
        state = growth_step(state, params);
        if (s % sample_every == 0) frames.push_back(state);
    }
    return frames;
}

const PointCloud2D& CellClouds::of(CellType type) const {
    switch (type) {
    case CellType::proliferative: return proliferative;
    case CellType::quiescent: return quiescent;
    default: return necrotic;
    }
}

CellClouds sample_clouds(const GrowthState& state, double kappa) {
    if (kappa < 1) throw Error("kappa must be at least 1");
    CellClouds clouds;
    clouds.step = state.step;
    auto sample = [&](const std::vector<double>& density, PointCloud2D& cloud) {
        for (size_t i = 0; i < density.size(); ++i) {
            long count = std::lround(density[i] * kappa);
            if (count < 1) continue;
            double radius = state.x[i];
            double offset = static_cast<double>(i) * kGoldenAngle;
            for (long j = 0; j < count; ++j) {
                double angle = kTwoPi * static_cast<double>(j) / static_cast<double>(count) + offset;
                cloud.points.push_back({radius * std::cos(angle), radius * std::sin(angle)});
            }
        }
    };
    sample(state.proliferative, clouds.proliferative);
    sample(state.quiescent, clouds.quiescent);
    sample(state.necrotic, clouds.necrotic);
    return clouds;
}

std::optional<size_t> onset_analysis(const std::vector<GrowthState>& frames, CellType type,
                                     double kappa) {
    if (frames.empty()) throw Error("onset analysis needs at least one frame");
    for (size_t f = 0; f < frames.size(); ++f) {
        const std::vector<double>& density = type == CellType::proliferative
                                                 ? frames[f].proliferative
                                                 : (type == CellType::quiescent
                                                        ? frames[f].quiescent
                                                        : frames[f].necrotic);
        for (double u : density)
            if (std::lround(u * kappa) >= 1) return f;
    }
    return std::nullopt;
}

std::vector<TopoSeriesRow> topo_time_series(const std::vector<GrowthState>& frames,
                                            double rips_t_max, double kappa, size_t max_points) {
    std::vector<size_t> indices(frames.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return topo_time_series(frames, indices, rips_t_max, kappa, max_points);
}

std::vector<TopoSeriesRow> topo_time_series(const std::vector<GrowthState>& frames,
                                            const std::vector<size_t>& frame_indices,
                                            double rips_t_max, double kappa, size_t max_points) {
    if (frames.empty()) throw Error("topo time series needs at least one frame");
    std::vector<TopoSeriesRow> rows;
    for (size_t index : frame_indices) {
        CellClouds clouds = sample_clouds(frames.at(index), kappa);
        for (CellType type :
             {CellType::proliferative, CellType::quiescent, CellType::necrotic}) {
            const PointCloud2D& cloud = clouds.of(type);
            TopoSeriesRow row;
            row.frame = index;
            row.type = type;
            row.points = cloud.size();
            if (!cloud.empty()) {
                Barcode barcode =
                    compute_persistence(rips_filtration(cloud, rips_t_max, max_points));
                row.pe_h0 = persistent_entropy(barcode, 0);
                row.pe_h1 = persistent_entropy(barcode, 1);
                row.hgen = generator_entropy(barcode);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace toporad
