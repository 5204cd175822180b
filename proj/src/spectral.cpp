#include "synsis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "synsis/rng.hpp"

namespace synsis {

namespace {

/// Strongly connected components of the sparsity pattern, iterative
/// Tarjan. Component ids are arbitrary; the spectrum of a Metzler matrix
/// is the union of its component diagonal blocks' spectra.
std::vector<std::int32_t> strongly_connected_components(const MomentMatrix& m,
                                                        std::int32_t& component_count) {
    const auto dim = static_cast<std::int32_t>(m.dim());
    std::vector<std::int32_t> index(dim, -1), low(dim, 0), comp(dim, -1);
    std::vector<std::int32_t> stack;
    std::vector<std::uint8_t> on_stack(dim, 0);
    std::int32_t next_index = 0;
    component_count = 0;

    struct Frame {
        std::int32_t v;
        std::int64_t edge;
    };
    std::vector<Frame> call_stack;

    for (std::int32_t root = 0; root < dim; ++root) {
        if (index[root] != -1)
            continue;
        call_stack.push_back({root, m.row_ptr()[root]});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call_stack.empty()) {
            auto& frame = call_stack.back();
            const std::int32_t v = frame.v;
            if (frame.edge < m.row_ptr()[v + 1]) {
                const std::int32_t w = m.col()[frame.edge++];
                if (w == v)
                    continue;
                if (index[w] == -1) {
                    call_stack.push_back({w, m.row_ptr()[w]});
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::int32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = component_count;
                } while (w != v);
                ++component_count;
            }
            call_stack.pop_back();
            if (!call_stack.empty())
                low[call_stack.back().v] = std::min(low[call_stack.back().v], low[v]);
        }
    }
    return comp;
}

/// One irreducible diagonal block of the shifted matrix B = M_block + sI,
/// entrywise nonnegative with strictly positive diagonal (hence primitive).
struct ShiftedBlock {
    std::size_t dim = 0;
    double shift = 0.0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<double> val;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::size_t r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
                acc += val[k] * x[static_cast<std::size_t>(col[k])];
            y[r] = acc;
        }
    }
};

ShiftedBlock extract_block(const MomentMatrix& m, const std::vector<std::int32_t>& nodes,
                           const std::vector<std::int32_t>& local_of, double shift_multiplier) {
    ShiftedBlock b;
    b.dim = nodes.size();
    double max_abs_diag = 0.0;
    for (std::int32_t g : nodes)
        max_abs_diag = std::max(max_abs_diag, std::abs(m.coeff(g, g)));
    b.shift = (1.0 + max_abs_diag) * std::max(1.0, shift_multiplier);

    b.row_ptr.assign(b.dim + 1, 0);
    for (std::size_t r = 0; r < b.dim; ++r) {
        const std::int32_t g = nodes[r];
        bool saw_diag = false;
        for (std::int64_t k = m.row_ptr()[g]; k < m.row_ptr()[g + 1]; ++k) {
            const std::int32_t c = m.col()[k];
            const std::int32_t lc = local_of[c];
            // local_of holds stale entries from other blocks; verify.
            if (lc < 0 || static_cast<std::size_t>(lc) >= nodes.size() ||
                nodes[static_cast<std::size_t>(lc)] != c)
                continue;
            double v = m.val()[k];
            if (c == g) {
                v += b.shift;
                saw_diag = true;
            }
            b.col.push_back(lc);
            b.val.push_back(v);
        }
        if (!saw_diag) {
            b.col.push_back(static_cast<std::int32_t>(r));
            b.val.push_back(b.shift);
        }
        b.row_ptr[r + 1] = static_cast<std::int64_t>(b.col.size());
    }
    return b;
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return (hi - lo) / std::max(1.0, hi); }
};

/// Collatz-Wielandt ratios of a strictly positive vector: for nonnegative
/// B, min_i (Bv)_i / v_i <= rho(B) <= max_i (Bv)_i / v_i. This is the
/// only convergence certificate used; it is rigorous no matter how the
/// candidate vector was produced.
Bracket ratios(const ShiftedBlock& b, const std::vector<double>& v, std::vector<double>& y) {
    b.multiply(v, y);
    Bracket br{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t r = 0; r < b.dim; ++r) {
        const double ratio = y[r] / v[r];
        br.lo = std::min(br.lo, ratio);
        br.hi = std::max(br.hi, ratio);
    }
    return br;
}

void normalize_positive(std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v)
        sum += x;
    for (auto& x : v)
        x = std::max(x / sum, 1e-290);
}

/// Ritz refinement for clustered spectra: when the power iterate stalls,
/// project B onto a small Krylov subspace, take the eigenvector of the
/// projected matrix for the largest real eigenvalue, and hand the
/// (positively clamped) Ritz vector back to the Collatz-Wielandt test.
std::vector<double> ritz_candidate(const ShiftedBlock& b, const std::vector<double>& start,
                                   std::size_t subspace, std::int64_t& matvecs) {
    const std::size_t m = std::min(subspace, b.dim);
    std::vector<std::vector<double>> basis;
    basis.reserve(m + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);

    std::vector<double> w(start);
    double norm = 0.0;
    for (double x : w)
        norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : w)
        x /= norm;
    basis.push_back(w);

    std::size_t built = 0;
    std::vector<double> next(b.dim);
    for (std::size_t j = 0; j < m; ++j) {
        b.multiply(basis[j], next);
        ++matvecs;
        // Modified Gram-Schmidt with one reorthogonalization pass.
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i <= j; ++i) {
                double dot = 0.0;
                for (std::size_t r = 0; r < b.dim; ++r)
                    dot += basis[i][r] * next[r];
                if (pass == 0)
                    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dot;
                else
                    h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += dot;
                for (std::size_t r = 0; r < b.dim; ++r)
                    next[r] -= dot * basis[i][r];
            }
        norm = 0.0;
        for (double x : next)
            norm += x * x;
        norm = std::sqrt(norm);
        h(static_cast<Eigen::Index>(j) + 1, static_cast<Eigen::Index>(j)) = norm;
        built = j + 1;
        if (norm < 1e-13)
            break;  // invariant subspace reached
        std::vector<double> q(next);
        for (auto& x : q)
            x /= norm;
        basis.push_back(std::move(q));
    }

    const Eigen::MatrixXd hm = h.topLeftCorner(static_cast<Eigen::Index>(built),
                                               static_cast<Eigen::Index>(built));
    const Eigen::EigenSolver<Eigen::MatrixXd> es(hm, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        return start;
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real())
            best = k;
    const Eigen::VectorXcd yc = es.eigenvectors().col(best);
    Eigen::VectorXd y = yc.real().norm() >= yc.imag().norm() ? yc.real().eval() : yc.imag().eval();

    std::vector<double> u(b.dim, 0.0);
    for (std::size_t i = 0; i < built; ++i) {
        const double c = y(static_cast<Eigen::Index>(i));
        for (std::size_t r = 0; r < b.dim; ++r)
            u[r] += c * basis[i][r];
    }
    double total = 0.0;
    for (double x : u)
        total += x;
    if (total < 0.0)
        for (auto& x : u)
            x = -x;
    double max_entry = 0.0;
    for (double x : u)
        max_entry = std::max(max_entry, x);
    if (max_entry <= 0.0)
        return start;
    for (auto& x : u)
        x = std::max(x, 1e-14 * max_entry);
    normalize_positive(u);
    return u;
}

struct BlockResult {
    double lambda;
    std::int64_t iterations;
    double residual;
    double shift;
};

BlockResult block_abscissa(const MomentMatrix& m, const std::vector<std::int32_t>& nodes,
                           const std::vector<std::int32_t>& local_of, const SolverOptions& opts,
                           Rng& rng) {
    if (nodes.size() == 1)
        return {m.coeff(nodes[0], nodes[0]), 0, 0.0, 0.0};

    const ShiftedBlock b = extract_block(m, nodes, local_of, opts.shift_multiplier);
    std::vector<double> v(b.dim);
    for (auto& x : v)
        x = 0.5 + rng.uniform();
    normalize_positive(v);

    std::vector<double> y(b.dim);
    Bracket br;
    std::int64_t matvecs = 0;
    double width_at_checkpoint = std::numeric_limits<double>::infinity();
    std::int64_t next_checkpoint = 256;

    while (matvecs < opts.max_iter) {
        br = ratios(b, v, y);
        ++matvecs;
        if (br.width() <= opts.tol)
            return {0.5 * (br.lo + br.hi) - b.shift, matvecs, br.width(), b.shift};

        if (matvecs >= next_checkpoint) {
            // Stalled brackets indicate a cluster of near-equal top
            // eigenvalues; escalate to a Ritz-refined candidate vector.
            if (br.width() > 0.5 * width_at_checkpoint) {
                v = ritz_candidate(b, v, 48, matvecs);
                br = ratios(b, v, y);
                ++matvecs;
                if (br.width() <= opts.tol)
                    return {0.5 * (br.lo + br.hi) - b.shift, matvecs, br.width(), b.shift};
            }
            width_at_checkpoint = br.width();
            next_checkpoint = matvecs + 256;
        }
        v.swap(y);
        normalize_positive(v);
    }
    throw ConvergenceError("spectral: power iteration did not converge in " +
                               std::to_string(opts.max_iter) + " iterations (bracket [" +
                               std::to_string(br.lo - b.shift) + ", " +
                               std::to_string(br.hi - b.shift) + "])",
                           0.5 * (br.lo + br.hi) - b.shift, matvecs);
}

SpectralResult abscissa_by_components(const MomentMatrix& m, const SolverOptions& opts) {
    if (opts.tol <= 0.0)
        throw std::invalid_argument("spectral: tolerance must be positive");

    std::int32_t num_components = 0;
    const auto comp = strongly_connected_components(m, num_components);
    std::vector<std::vector<std::int32_t>> members(static_cast<std::size_t>(num_components));
    for (std::int32_t r = 0; r < static_cast<std::int32_t>(m.dim()); ++r)
        members[static_cast<std::size_t>(comp[r])].push_back(r);

    std::vector<std::int32_t> local_of(static_cast<std::size_t>(m.dim()), -1);
    Rng rng(0x5eedULL);  // fixed stream keeps results reproducible

    SpectralResult best;
    best.lambda_max = -std::numeric_limits<double>::infinity();
    std::int64_t total_iterations = 0;
    for (const auto& nodes : members) {
        for (std::size_t r = 0; r < nodes.size(); ++r)
            local_of[static_cast<std::size_t>(nodes[r])] = static_cast<std::int32_t>(r);
        const BlockResult block = block_abscissa(m, nodes, local_of, opts, rng);
        total_iterations += block.iterations;
        if (block.lambda > best.lambda_max) {
            best.lambda_max = block.lambda;
            best.residual = block.residual;
            best.shift_used = block.shift;
        }
    }
    best.iterations = total_iterations;
    return best;
}

} // namespace

SpectralResult lambda_max_metzler(const MomentMatrix& m, const SolverOptions& opts) {
    if (!m.is_metzler())
        throw std::invalid_argument("spectral: matrix is not Metzler");
    return abscissa_by_components(m, opts);
}

SpectralResult lambda_max_adjacency(const Graph& g, const SolverOptions& opts) {
    const auto n = static_cast<std::int32_t>(g.num_nodes());
    if (n == 0)
        throw std::invalid_argument("spectral: empty graph");
    // The adjacency matrix is Metzler (zero diagonal), so the same
    // component-wise iteration applies.
    std::vector<std::int64_t> row_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::int32_t> col;
    std::vector<double> val;
    for (std::int32_t i = 0; i < n; ++i) {
        for (int j : g.neighbors(i)) {
            col.push_back(j);
            val.push_back(1.0);
        }
        row_ptr[static_cast<std::size_t>(i) + 1] = static_cast<std::int64_t>(col.size());
    }
    return abscissa_by_components(MomentMatrix(n, std::move(row_ptr), std::move(col), std::move(val)),
                                  opts);
}

double rho_sis_bar(double beta, double delta, double lambda_a) {
    return beta * lambda_a - delta;
}

} // namespace synsis
