#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/fixtures.hpp"
#include "synsis/model.hpp"

using namespace synsis;

TEST_CASE("homogeneous parameters fill uniform arrays") {
    const auto p = ModelParams::homogeneous(34, 0.02, 3.0, 0.01);
    REQUIRE(p.size() == 34);
    for (std::size_t i = 0; i < 34; ++i) {
        CHECK(p.beta[i] == 0.02);
        CHECK(p.delta[i] == 3.0);
        CHECK(p.gamma[i] == 0.01);
    }
}

TEST_CASE("all-zero rates are a valid boundary case") {
    const auto p = ModelParams::homogeneous(1, 0.0, 0.0, 0.0);
    CHECK(p.beta[0] == 0.0);
}

TEST_CASE("negative and non-finite rates are rejected") {
    CHECK_THROWS_AS(ModelParams::homogeneous(2, -1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::homogeneous(2, 0.1, -0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::homogeneous(2, 0.1, 1.0, -3.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::homogeneous(0, 0.1, 1.0, 0.0), std::invalid_argument);
    ModelParams p = ModelParams::homogeneous(2, 0.1, 1.0, 0.0);
    p.beta[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
}

TEST_CASE("infected neighbor counts with exclusion") {
    const Graph path = test::path_graph(3);
    auto s = EpidemicState::from_infected_set(3, {0, 1});
    CHECK(infected_neighbor_count(path, s, 1, 2) == 1);

    auto s2 = EpidemicState::from_infected_set(3, {1});
    CHECK(infected_neighbor_count(path, s2, 1, 0) == 0);

    const Graph k4 = test::complete_graph(4);
    auto s3 = EpidemicState::from_infected_set(4, {1, 2, 3});
    CHECK(infected_neighbor_count(k4, s3, 1, 0) == 2);
}

TEST_CASE("infection rate of the two-infected-neighbor picture") {
    // i(0) adjacent to j(1) and k(2); j has its own infected neighbor 3,
    // k has none. Infected {1, 2, 3}: j contributes beta + gamma, k beta.
    const Graph g(4, {{0, 1}, {0, 2}, {1, 3}});
    const auto p = ModelParams::homogeneous(4, 0.4, 1.0, 0.25);
    auto s = EpidemicState::from_infected_set(4, {1, 2, 3});
    CHECK(infection_rate(g, p, s, 0) == doctest::Approx(2 * 0.4 + 0.25).epsilon(1e-12));
}

TEST_CASE("infection rate matches direct substitution") {
    // One infected neighbor j with three further infected neighbors.
    const Graph g(5, {{0, 1}, {1, 2}, {1, 3}, {1, 4}});
    const auto p = ModelParams::homogeneous(5, 0.02, 1.0, 0.01);
    auto s = EpidemicState::from_infected_set(5, {1, 2, 3, 4});
    CHECK(infection_rate(g, p, s, 0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("path end node sees one direct and one synergy term") {
    const Graph path = test::path_graph(3);
    const auto p = ModelParams::homogeneous(3, 0.7, 1.0, 0.2);
    auto s = EpidemicState::from_infected_set(3, {0, 1});
    CHECK(infection_rate(path, p, s, 2) == doctest::Approx(0.7 + 0.2).epsilon(1e-12));
}

TEST_CASE("calling infection_rate on an infected node is a contract violation") {
    const Graph path = test::path_graph(2);
    const auto p = ModelParams::homogeneous(2, 0.5, 1.0, 0.0);
    auto s = EpidemicState::from_infected_set(2, {0});
    CHECK_THROWS_AS(infection_rate(path, p, s, 0), std::logic_error);
}

TEST_CASE("zero synergy reduces to the standard SIS rate") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = test::random_graph(6, rng);
        auto p = test::random_params(6, rng, 0.0, 2.0);
        p.gamma.assign(6, 0.0);
        EpidemicState s(6);
        for (int i = 0; i < 6; ++i)
            if (rng.uniform() < 0.5)
                s.infect(i);
        for (int i = 0; i < 6; ++i) {
            if (s.infected(i))
                continue;
            const double expected = p.beta[i] * infected_neighbor_count(g, s, i, i);
            CHECK(infection_rate(g, p, s, i) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("rates are monotone in the infected set and vanish without infected neighbors") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = test::random_graph(6, rng);
        const auto p = test::random_params(6, rng, 0.0, 2.0);
        EpidemicState s(6);
        std::vector<int> order{0, 1, 2, 3, 4, 5};
        for (std::size_t i = 6; i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_below(i)]);

        std::vector<double> before(6, 0.0);
        for (int added : order) {
            for (int i = 0; i < 6; ++i)
                if (!s.infected(i)) {
                    const double r = infection_rate(g, p, s, i);
                    CHECK(r >= before[i] - 1e-12);
                    before[i] = r;
                    if (infected_neighbor_count(g, s, i, i) == 0)
                        CHECK(r == 0.0);
                }
            s.infect(added);
        }
    }
}

TEST_CASE("epidemic state keeps its infected count in sync") {
    EpidemicState s(5);
    CHECK(s.infected_count() == 0);
    s.infect(2);
    s.infect(2);
    s.infect(4);
    CHECK(s.infected_count() == 2);
    s.recover(2);
    s.recover(2);
    CHECK(s.infected_count() == 1);
    CHECK_THROWS_AS(EpidemicState::from_infected_set(3, {5}), std::out_of_range);
}
