#include "synsis/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace synsis {

ModelParams ModelParams::homogeneous(std::size_t n, double beta, double delta, double gamma) {
    if (n < 1)
        throw std::invalid_argument("model: need at least one node");
    ModelParams p;
    p.delta.assign(n, delta);
    p.beta.assign(n, beta);
    p.gamma.assign(n, gamma);
    p.validate(n);
    return p;
}

void ModelParams::validate(std::size_t n) const {
    if (delta.size() != n || beta.size() != n || gamma.size() != n)
        throw std::invalid_argument("model: rate arrays must have length " + std::to_string(n));
    auto check = [](const std::vector<double>& v, const char* name) {
        for (double r : v)
            if (!std::isfinite(r) || r < 0.0)
                throw std::invalid_argument(std::string("model: ") + name +
                                            " rates must be finite and nonnegative");
    };
    check(delta, "recovery");
    check(beta, "transmission");
    check(gamma, "synergy");
}

EpidemicState EpidemicState::from_infected_set(std::size_t n, const std::vector<int>& infected) {
    EpidemicState s(n);
    for (int i : infected) {
        if (i < 0 || static_cast<std::size_t>(i) >= n)
            throw std::out_of_range("state: infected node index out of range");
        s.infect(i);
    }
    return s;
}

int infected_neighbor_count(const Graph& g, const EpidemicState& s, int j, int excluding) {
    int count = 0;
    for (int k : g.neighbors(j))
        if (k != excluding && s.infected(k))
            ++count;
    return count;
}

double infection_rate(const Graph& g, const ModelParams& p, const EpidemicState& s, int i) {
    if (s.infected(i))
        throw std::logic_error("infection_rate: node " + std::to_string(i) + " is infected");
    double rate = 0.0;
    for (int j : g.neighbors(i)) {
        if (!s.infected(j))
            continue;
        rate += p.beta[static_cast<std::size_t>(i)] +
                p.gamma[static_cast<std::size_t>(j)] * infected_neighbor_count(g, s, j, i);
    }
    return rate;
}

} // namespace synsis
