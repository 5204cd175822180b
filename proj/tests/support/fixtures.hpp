#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "synsis/graph.hpp"
#include "synsis/model.hpp"
#include "synsis/rng.hpp"

namespace synsis::test {

inline std::string data_dir() {
    const char* dir = std::getenv("SYNSIS_DATA");
    if (!dir)
        throw std::runtime_error("SYNSIS_DATA is not set; run through ctest");
    return dir;
}

inline Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Graph(static_cast<std::size_t>(n), e);
}

inline Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return Graph(static_cast<std::size_t>(n), e);
}

inline Graph star_graph(int leaves) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i)
        e.emplace_back(0, i);
    return Graph(static_cast<std::size_t>(leaves) + 1, e);
}

/// Uniform over all edge sets: each of the C(n,2) possible edges is
/// present independently with probability one half.
inline Graph random_graph(int n, Rng& rng) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.5)
                e.emplace_back(i, j);
    return Graph(static_cast<std::size_t>(n), e);
}

inline ModelParams random_params(std::size_t n, Rng& rng, double lo, double hi) {
    ModelParams p;
    p.delta.resize(n);
    p.beta.resize(n);
    p.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.delta[i] = lo + (hi - lo) * rng.uniform();
        p.beta[i] = lo + (hi - lo) * rng.uniform();
        p.gamma[i] = lo + (hi - lo) * rng.uniform();
    }
    return p;
}

} // namespace synsis::test
