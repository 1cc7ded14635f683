#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toporad/image.hpp"

namespace toporad {

/// Dimensionless parameters of the three-species tumour growth model on a
/// radial 1D grid. dt must satisfy the explicit-scheme guard dt <= dx^2/2.
struct GrowthParams {
    double alpha = 0.5;
    double gamma = 10.0;
    double beta = 0.5;
    double c0 = 1.0;
    double dx = 0.05;
    double dt = 5e-4;
    int n_nodes = 201;
    double t_end = 20.0;

    void validate() const;
    long total_steps() const;
};

/// Densities and nutrient on the radial grid at one timestep.
struct GrowthState {
    std::vector<double> x;
    std::vector<double> proliferative;
    std::vector<double> quiescent;
    std::vector<double> necrotic;
    std::vector<double> nutrient;
    long step = 0;
    long clamped = 0; // negative-density clamps so far, diagnostic
};

enum class CellType { proliferative = 0, quiescent = 1, necrotic = 2 };
const char* to_string(CellType type);

/// f = (1 - tanh(4c - 2))/2, g = beta*exp(beta*c), h = f/2.
struct ReactionTerms {
    double f = 0;
    double g = 0;
    double h = 0;
};
ReactionTerms reaction_terms(double c, double beta);

/// c_i = c0*gamma/(gamma + p_i) * (1 - alpha*(p_i + q_i + n_i)).
std::vector<double> nutrient(const std::vector<double>& p, const std::vector<double>& q,
                             const std::vector<double>& n, const GrowthParams& params);

/// One explicit-Euler update: competitive diffusion fluxes at half-nodes
/// with zero-flux boundaries, reaction terms per the model, proliferative
/// loss -f(c)*p, negative densities clamped to 0 and counted.
GrowthState growth_step(const GrowthState& state, const GrowthParams& params);

/// Initial profile p = exp(-(x/eps)^2) with eps = 0.5, q = n = 0.
GrowthState initial_state(const GrowthParams& params);

/// Frames every sample_every steps, step 0 included.
std::vector<GrowthState> simulate(const GrowthParams& params, long sample_every = 100);

/// Per-type point clouds sampled from one frame: round(u_i * kappa) points
/// on the circle of radius x_i, golden-angle offset per ring. Deterministic.
struct CellClouds {
    PointCloud2D proliferative;
    PointCloud2D quiescent;
    PointCloud2D necrotic;
    long step = 0;

    const PointCloud2D& of(CellType type) const;
};
CellClouds sample_clouds(const GrowthState& state, double kappa = 8.0);

/// First frame index whose sampled cloud for the type is non-empty.
std::optional<size_t> onset_analysis(const std::vector<GrowthState>& frames, CellType type,
                                     double kappa = 8.0);

struct TopoSeriesRow {
    size_t frame = 0;
    CellType type = CellType::proliferative;
    size_t points = 0;
    double pe_h0 = 0;
    double pe_h1 = 0;
    double hgen = 0;
};

/// PE(H0), PE(H1) and GH per frame and cell type from the Rips barcode of
/// the sampled cloud; empty clouds give zero rows.
std::vector<TopoSeriesRow> topo_time_series(const std::vector<GrowthState>& frames,
                                            double rips_t_max = 2.0, double kappa = 8.0,
                                            size_t max_points = 5000);

/// Same, restricted to the given frame indices (indices are reported in the
/// rows unchanged).
std::vector<TopoSeriesRow> topo_time_series(const std::vector<GrowthState>& frames,
                                            const std::vector<size_t>& frame_indices,
                                            double rips_t_max, double kappa,
                                            size_t max_points = 5000);

} // namespace toporad
