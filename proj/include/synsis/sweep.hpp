#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "synsis/graph.hpp"
#include "synsis/sim.hpp"
#include "synsis/spectral.hpp"

namespace synsis {

/// Grid of homogeneous (delta, beta) cells to evaluate, with a shared
/// synergy strength and simulation template.
struct SweepGrid {
    std::vector<double> delta_values;  // increasing
    std::vector<double> beta_values;   // increasing
    double gamma = 0.01;
    SimConfig sim;                 // horizon/seed/reinfect template; V0 empty means all nodes
    std::int64_t runs_per_cell = 4;
    SolverOptions solver;

    void validate() const;
};

/// Log-spaced grid axis with `count` points from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct SweepCell {
    double delta = 0.0;
    double beta = 0.0;
    double y_star = 0.0;    // mean metastable infected count over the cell's runs
    double lambda_m = 0.0;  // spectral bound on the growth rate
    double rho_sis = 0.0;   // conventional bound beta * lambda_max(A) - delta
    bool in_e = false;        // y* < 1
    bool in_e_lower = false;  // lambda_m < 0
    bool in_e_sis = false;    // rho_sis < 0
};

/// Evaluates every (delta, beta) cell: y* averaged over runs_per_cell
/// independently seeded re-infection runs, the moment-matrix bound, and
/// the conventional bound. Cells are emitted in row-major order (delta
/// outer, beta inner) and the result is deterministic for a given grid
/// seed regardless of `threads`.
std::vector<SweepCell> run_sweep(const Graph& g, const SweepGrid& grid, int threads = 0);

struct BoundaryColumn {
    double delta = 0.0;
    // Largest beta still classified extinct under each criterion; empty
    // when no cell in the column is extinct under that criterion.
    std::optional<double> beta_e;
    std::optional<double> beta_e_lower;
    std::optional<double> beta_e_sis;
};

/// Per-delta extinction boundaries of the three regions. The cells must
/// form a complete grid (every delta paired with every beta).
std::vector<BoundaryColumn> classify_boundaries(const std::vector<SweepCell>& cells);

/// CSV with header "delta,beta,y_star,lambda_M,rho_sis,in_E,in_E_lower,in_E_sis",
/// one row per cell, floats printed with 9 significant digits, booleans 0/1.
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

} // namespace synsis
