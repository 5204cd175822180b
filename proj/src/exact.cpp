#include "synsis/exact.hpp"

#include "synsis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

namespace synsis {

ExactModel::ExactModel(const Graph& g, const ModelParams& p, int node_cap)
    : n_(static_cast<int>(g.num_nodes())) {
    p.validate(g.num_nodes());
    if (n_ > node_cap)
        throw std::invalid_argument("exact: " + std::to_string(n_) + " nodes means 2^" +
                                    std::to_string(n_) +
                                    " states; raise the cap explicitly if that is intended");
    if (n_ > 30)
        throw std::invalid_argument("exact: state space too large to enumerate");

    const auto num = num_states();
    exit_rate_.assign(num, 0.0);
    for (std::uint32_t mask = 0; mask < num; ++mask) {
        EpidemicState s(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i)
            if (mask & (1u << i))
                s.infect(i);
        for (int i = 0; i < n_; ++i) {
            const auto bit = 1u << i;
            double rate;
            std::uint32_t to;
            if (mask & bit) {
                rate = p.delta[i];
                to = mask & ~bit;
            } else {
                rate = infection_rate(g, p, s, i);
                to = mask | bit;
            }
            if (rate > 0.0) {
                transitions_.push_back({mask, to, rate});
                exit_rate_[mask] += rate;
            }
        }
    }
}

void ExactModel::apply_generator(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(x.size(), 0.0);
    for (std::size_t s = 0; s < x.size(); ++s)
        y[s] = -exit_rate_[s] * x[s];
    for (const auto& t : transitions_)
        y[t.to] += t.rate * x[t.from];
}

std::vector<std::vector<double>> integrate_master_equation(const ExactModel& m,
                                                           std::uint32_t initial,
                                                           const std::vector<double>& times,
                                                           double abs_tol) {
    if (initial >= m.num_states())
        throw std::invalid_argument("exact: initial state mask out of range");
    double prev = 0.0;
    for (double t : times) {
        if (t < prev)
            throw std::invalid_argument("exact: times must be nondecreasing and nonnegative");
        prev = t;
    }

    namespace ode = boost::numeric::odeint;
    using state_type = std::vector<double>;
    auto system = [&m](const state_type& x, state_type& dxdt, double) {
        m.apply_generator(x, dxdt);
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state_type>>(abs_tol, abs_tol);

    state_type dist(m.num_states(), 0.0);
    dist[initial] = 1.0;
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    double t_now = 0.0;
    for (double t : times) {
        if (t > t_now) {
            ode::integrate_adaptive(stepper, system, dist, t_now, t, std::min(0.01, t - t_now));
            t_now = t;
        }
        double sum = 0.0;
        for (double v : dist) {
            if (v < -1e-9)
                throw NumericalError("exact: integrator produced a negative probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw NumericalError("exact: distribution mass drifted to " + std::to_string(sum));
        out.push_back(dist);
    }
    return out;
}

std::int64_t triple_index(int n, int i, int j, int k) {
    if (!(0 <= i && i < j && j < k && k < n))
        throw std::invalid_argument("exact: triple indices must satisfy 0 <= i < j < k < N");
    auto c2 = [](std::int64_t x) { return x * (x - 1) / 2; };
    auto c3 = [&c2](std::int64_t x) { return x * (x - 1) * (x - 2) / 6; };
    // Triples preceding (i,j,k) in lexicographic order.
    return c3(n) - c3(n - i) + c2(n - 1 - i) - c2(n - j) + (k - j - 1);
}

MomentTrajectories moment_trajectories(const ExactModel& m, std::uint32_t initial,
                                       const std::vector<double>& times) {
    const auto dists = integrate_master_equation(m, initial, times);
    const int n = m.nodes();
    const std::int64_t pair_count = static_cast<std::int64_t>(n) * (n - 1) / 2;
    const std::int64_t triple_count =
        static_cast<std::int64_t>(n) * (n - 1) * (n - 2) / 6;

    MomentTrajectories out;
    out.times = times;
    out.singles.assign(times.size(), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    out.pairs.assign(times.size(), std::vector<double>(static_cast<std::size_t>(pair_count), 0.0));
    out.triples.assign(times.size(),
                       std::vector<double>(static_cast<std::size_t>(triple_count), 0.0));

    for (std::size_t t = 0; t < dists.size(); ++t) {
        const auto& dist = dists[t];
        for (std::uint32_t mask = 0; mask < dist.size(); ++mask) {
            const double w = dist[mask];
            if (w == 0.0)
                continue;
            for (int i = 0; i < n; ++i) {
                if (!(mask & (1u << i)))
                    continue;
                out.singles[t][static_cast<std::size_t>(i)] += w;
                for (int j = i + 1; j < n; ++j) {
                    if (!(mask & (1u << j)))
                        continue;
                    // Pair slots follow the MomentIndex order, offset by -N.
                    const std::int64_t ps =
                        static_cast<std::int64_t>(i) * n - static_cast<std::int64_t>(i) * (i + 1) / 2 +
                        (j - i - 1);
                    out.pairs[t][static_cast<std::size_t>(ps)] += w;
                    for (int k = j + 1; k < n; ++k)
                        if (mask & (1u << k))
                            out.triples[t][static_cast<std::size_t>(triple_index(n, i, j, k))] += w;
                }
            }
        }
    }
    return out;
}

double exact_growth_rate(const ExactModel& m) {
    const auto dim = static_cast<Eigen::Index>(m.num_states()) - 1;
    if (dim < 1)
        throw std::invalid_argument("exact: no transient states");

    // Sub-generator over nonempty masks; transitions into the empty state
    // leave the block (they only contribute to the diagonal outflow).
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t s = 1; s < m.num_states(); ++s)
        q(static_cast<Eigen::Index>(s) - 1, static_cast<Eigen::Index>(s) - 1) = -m.exit_rates()[s];
    for (const auto& t : m.transitions())
        if (t.from != 0 && t.to != 0)
            q(static_cast<Eigen::Index>(t.from) - 1, static_cast<Eigen::Index>(t.to) - 1) += t.rate;

    const Eigen::EigenSolver<Eigen::MatrixXd> solver(q, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("exact: eigensolver failed on the transient block");
    return solver.eigenvalues().real().maxCoeff();
}

} // namespace synsis
