#pragma once

#include <cstdint>
#include <stdexcept>

#include "synsis/errors.hpp"
#include "synsis/graph.hpp"
#include "synsis/moments.hpp"

namespace synsis {

struct SpectralResult {
    double lambda_max = 0.0;
    std::int64_t iterations = 0;
    double residual = 0.0;  // certified relative bracket width at exit
    double shift_used = 0.0;
};

/// Power iteration failed to certify the requested accuracy. Carries the
/// last bracket midpoint so callers can inspect the partial result.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double last_estimate, std::int64_t iterations)
        : NumericalError(what), last_estimate(last_estimate), iterations(iterations) {}

    double last_estimate;
    std::int64_t iterations;
};

struct SolverOptions {
    double tol = 1e-9;
    std::int64_t max_iter = 100000;
    double shift_multiplier = 1.0;  // scales the diagonal shift; solver knob for tests
};

/// Spectral abscissa of a Metzler matrix M, computed as rho(B) - s for
/// the entrywise-nonnegative shift B = M + sI with s = 1 + max|M_ii|.
/// rho(B) is found by power iteration from a strictly positive vector;
/// the min/max Rayleigh ratios bracket rho(B) at every step and the
/// bracket width certifies convergence. Throws std::invalid_argument on
/// a non-Metzler input and ConvergenceError when the bracket fails to
/// close within max_iter.
SpectralResult lambda_max_metzler(const MomentMatrix& m, const SolverOptions& opts = {});

/// Largest adjacency eigenvalue, via the same iteration on A + I.
SpectralResult lambda_max_adjacency(const Graph& g, const SolverOptions& opts = {});

/// Conventional synergy-free growth-rate bound beta * lambda_max(A) - delta.
double rho_sis_bar(double beta, double delta, double lambda_a);

} // namespace synsis
