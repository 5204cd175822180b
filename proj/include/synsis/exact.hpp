#pragma once

#include <cstdint>
#include <vector>

#include "synsis/graph.hpp"
#include "synsis/model.hpp"

namespace synsis {

/// Brute-force ground truth for small networks: the full 2^N-state
/// continuous-time Markov chain. State masks encode infection patterns
/// with bit i = x_i. Immutable after construction.
class ExactModel {
public:
    static constexpr int default_node_cap = 12;

    /// Assembles the infinitesimal generator. From a state, each infected
    /// node recovers at rate delta_i and each susceptible node is infected
    /// at its synergistic rate; no other transitions exist. Throws
    /// std::invalid_argument when N exceeds the cap (the state space has
    /// 2^N states).
    ExactModel(const Graph& g, const ModelParams& p, int node_cap = default_node_cap);

    int nodes() const { return n_; }
    std::size_t num_states() const { return std::size_t{1} << n_; }

    struct Transition {
        std::uint32_t from;
        std::uint32_t to;
        double rate;
    };

    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::vector<double>& exit_rates() const { return exit_rate_; }

    /// dP/dt for the master equation (y = Q^T x).
    void apply_generator(const std::vector<double>& x, std::vector<double>& y) const;

private:
    int n_;
    std::vector<Transition> transitions_;
    std::vector<double> exit_rate_;  // total outflow rate per state
};

/// Distribution over the 2^N states at each requested time, starting from
/// a point mass on `initial`. Integrated adaptively; each output
/// distribution is entrywise >= -1e-9 and sums to 1 within 1e-9, else an
/// exception is raised.
std::vector<std::vector<double>> integrate_master_equation(const ExactModel& m,
                                                           std::uint32_t initial,
                                                           const std::vector<double>& times,
                                                           double abs_tol = 1e-10);

/// Lexicographic index of the ordered triple i < j < k among all C(N,3).
std::int64_t triple_index(int n, int i, int j, int k);

struct MomentTrajectories {
    std::vector<double> times;
    // singles[t][i], pairs[t][pair slot per MomentIndex order], triples[t][triple_index]
    std::vector<std::vector<double>> singles;
    std::vector<std::vector<double>> pairs;
    std::vector<std::vector<double>> triples;
};

/// First, second, and third moments of the exact distribution at each
/// time: p_i, p_{ij} (i<j), p_{ijk} (i<j<k), obtained by summing the
/// distribution over all masks containing the index set.
MomentTrajectories moment_trajectories(const ExactModel& m, std::uint32_t initial,
                                       const std::vector<double>& times);

/// Worst-case asymptotic growth rate of the expected infected count: the
/// maximum real part of the eigenvalues of the generator restricted to
/// the 2^N - 1 transient (nonempty) states.
double exact_growth_rate(const ExactModel& m);

} // namespace synsis
