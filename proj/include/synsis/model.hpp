#pragma once

#include <cstdint>
#include <vector>

#include "synsis/graph.hpp"

namespace synsis {

/// Per-node rate parameters of the synergistic SIS model: recovery rate
/// delta[i], transmission rate beta[i], and synergy strength gamma[j].
/// Rates are probabilities per unit time; they may exceed one but must be
/// finite and nonnegative.
struct ModelParams {
    std::vector<double> delta;
    std::vector<double> beta;
    std::vector<double> gamma;

    std::size_t size() const { return delta.size(); }

    /// All nodes share the same scalar rates.
    static ModelParams homogeneous(std::size_t n, double beta, double delta, double gamma);

    /// Throws std::invalid_argument unless all three arrays have length n
    /// with finite nonnegative entries.
    void validate(std::size_t n) const;
};

/// Binary infection indicator per node with a cached infected count.
class EpidemicState {
public:
    explicit EpidemicState(std::size_t n) : x_(n, 0), infected_count_(0) {}

    static EpidemicState from_infected_set(std::size_t n, const std::vector<int>& infected);

    bool infected(int i) const { return x_[static_cast<std::size_t>(i)] != 0; }
    int infected_count() const { return infected_count_; }
    std::size_t size() const { return x_.size(); }

    void infect(int i) {
        auto& v = x_[static_cast<std::size_t>(i)];
        if (!v) {
            v = 1;
            ++infected_count_;
        }
    }

    void recover(int i) {
        auto& v = x_[static_cast<std::size_t>(i)];
        if (v) {
            v = 0;
            --infected_count_;
        }
    }

    const std::vector<std::uint8_t>& indicator() const { return x_; }

private:
    std::vector<std::uint8_t> x_;
    int infected_count_;
};

/// Number of infected neighbors of node j, not counting `excluding`.
/// When `excluding` is a susceptible node this equals m_j(t), the count
/// entering the synergistic infection rate.
int infected_neighbor_count(const Graph& g, const EpidemicState& s, int j, int excluding);

/// Instantaneous infection rate of susceptible node i:
///   sum over infected neighbors j of  beta[i] + gamma[j] * m_j
/// where m_j counts j's infected neighbors other than i. Throws
/// std::logic_error if node i is currently infected.
double infection_rate(const Graph& g, const ModelParams& p, const EpidemicState& s, int i);

} // namespace synsis
