#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "support/fixtures.hpp"
#include "support/moment_rhs.hpp"
#include "synsis/exact.hpp"
#include "synsis/moments.hpp"
#include "synsis/spectral.hpp"

using namespace synsis;

namespace {

std::map<std::pair<std::uint32_t, std::uint32_t>, double> transition_map(const ExactModel& m) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> t;
    for (const auto& tr : m.transitions())
        t[{tr.from, tr.to}] += tr.rate;
    return t;
}

} // namespace

TEST_CASE("single node: one decay transition") {
    const Graph g(1, {});
    const ExactModel m(g, ModelParams::homogeneous(1, 0.7, 1.0, 0.0));
    CHECK(m.num_states() == 2);
    const auto t = transition_map(m);
    REQUIRE(t.size() == 1);
    CHECK(t.at({1u, 0u}) == 1.0);
}

TEST_CASE("single edge, zero synergy: transitions out of one infected node") {
    const Graph k2 = test::complete_graph(2);
    const double beta = 0.6, delta = 1.3;
    const ExactModel m(k2, ModelParams::homogeneous(2, beta, delta, 0.0));
    const auto t = transition_map(m);
    CHECK(t.at({1u, 0u}) == delta);       // node 0 recovers
    CHECK(t.at({1u, 3u}) == beta);        // node 1 gets infected
    CHECK(t.at({2u, 0u}) == delta);
    CHECK(t.at({2u, 3u}) == beta);
    CHECK(t.at({3u, 1u}) == delta);
    CHECK(t.at({3u, 2u}) == delta);
    CHECK(t.count({0u, 1u}) == 0);        // the empty state is absorbing
}

TEST_CASE("triangle: synergy doubles up for a node with two infected neighbors") {
    const Graph k3 = test::complete_graph(3);
    const double beta = 0.8, delta = 1.0, gamma = 0.3;
    const ExactModel m(k3, ModelParams::homogeneous(3, beta, delta, gamma));
    const auto t = transition_map(m);
    // State {0,1} = mask 3; susceptible node 2 has two infected neighbors,
    // each of which has one infected neighbor besides 2.
    CHECK(t.at({3u, 7u}) == doctest::Approx(2 * beta + 2 * gamma).epsilon(1e-12));
}

TEST_CASE("generator rows sum to zero") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(4));
        const Graph g = test::random_graph(n, rng);
        const ExactModel m(g, test::random_params(static_cast<std::size_t>(n), rng, 0.0, 2.0));
        std::vector<double> inflow(m.num_states(), 0.0);
        for (const auto& tr : m.transitions())
            inflow[tr.from] += tr.rate;
        for (std::size_t s = 0; s < m.num_states(); ++s)
            CHECK(std::abs(inflow[s] - m.exit_rates()[s]) <= 1e-12);
    }
}

TEST_CASE("node cap refusal names the state space") {
    const Graph g = test::path_graph(13);
    CHECK_THROWS_WITH_AS(ExactModel(g, ModelParams::homogeneous(13, 0.1, 1.0, 0.0)),
                         doctest::Contains("2^13"), std::invalid_argument);
    // Raising the cap explicitly is allowed.
    const ExactModel ok(g, ModelParams::homogeneous(13, 0.1, 1.0, 0.0), 13);
    CHECK(ok.num_states() == 8192);
}

TEST_CASE("integration starts at the requested point mass") {
    const Graph k2 = test::complete_graph(2);
    const ExactModel m(k2, ModelParams::homogeneous(2, 0.5, 1.0, 0.2));
    const auto dists = integrate_master_equation(m, 2u, {0.0});
    REQUIRE(dists.size() == 1);
    CHECK(dists[0][2] == 1.0);
    CHECK(dists[0][0] == 0.0);
}

TEST_CASE("single node decays exponentially") {
    const Graph g(1, {});
    const ExactModel m(g, ModelParams::homogeneous(1, 0.0, 1.0, 0.0));
    const std::vector<double> times{0.25, 0.5, 1.0, 2.0, 4.0};
    const auto dists = integrate_master_equation(m, 1u, times);
    for (std::size_t k = 0; k < times.size(); ++k)
        CHECK(dists[k][1] == doctest::Approx(std::exp(-times[k])).epsilon(1e-8));
}

TEST_CASE("distributions match the dense matrix exponential") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(3));
        const Graph g = test::random_graph(n, rng);
        const ExactModel m(g, test::random_params(static_cast<std::size_t>(n), rng, 0.1, 1.5));

        const auto dim = static_cast<Eigen::Index>(m.num_states());
        Eigen::MatrixXd qt = Eigen::MatrixXd::Zero(dim, dim);
        for (std::size_t s = 0; s < m.num_states(); ++s)
            qt(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) = -m.exit_rates()[s];
        for (const auto& tr : m.transitions())
            qt(static_cast<Eigen::Index>(tr.to), static_cast<Eigen::Index>(tr.from)) += tr.rate;

        const std::uint32_t initial = static_cast<std::uint32_t>(rng.uniform_below(m.num_states()));
        const double t = 0.3 + rng.uniform();
        const auto dist = integrate_master_equation(m, initial, {t}).front();
        const Eigen::MatrixXd expm = (qt * t).exp();
        for (std::size_t s = 0; s < m.num_states(); ++s)
            CHECK(dist[s] == doctest::Approx(expm(static_cast<Eigen::Index>(s),
                                                  static_cast<Eigen::Index>(initial)))
                                 .epsilon(1e-7));
    }
}

TEST_CASE("distributions stay normalized and essentially nonnegative") {
    const Graph g = test::complete_graph(4);
    const ExactModel m(g, ModelParams::homogeneous(4, 1.5, 0.4, 0.6));
    const auto dists = integrate_master_equation(m, 15u, {0.1, 1.0, 5.0, 20.0});
    for (const auto& d : dists) {
        double sum = 0.0;
        for (double v : d) {
            CHECK(v >= -1e-9);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("moments from the all-infected start are one at time zero, ordered afterwards") {
    const Graph g = test::random_graph(5, *[] { static Rng r(3); return &r; }());
    const ExactModel m(g, ModelParams::homogeneous(5, 0.9, 0.7, 0.2));
    const auto traj = moment_trajectories(m, 31u, {0.0, 0.4, 1.1});
    for (double v : traj.singles[0])
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : traj.pairs[0])
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : traj.triples[0])
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    const MomentIndex idx(5);
    for (std::size_t t = 1; t < 3; ++t) {
        const auto s = test::snapshot_at(traj, t, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = i + 1; j < 5; ++j) {
                CHECK(s.p2(i, j) <= std::min(s.p1(i), s.p1(j)) + 1e-10);
                for (int k = j + 1; k < 5; ++k)
                    CHECK(s.p3(i, j, k) <= s.p2(i, j) + 1e-10);
            }
    }
}

TEST_CASE("finite differences of the trajectory satisfy the exact moment equation") {
    const Graph k3 = test::complete_graph(3);
    const auto p = ModelParams::homogeneous(3, 0.8, 1.0, 0.3);
    const ExactModel m(k3, p);

    const double h = 0.01;
    for (double t : {0.5, 1.0, 2.5}) {
        const std::vector<double> stencil{t - 2 * h, t - h, t, t + h, t + 2 * h};
        const auto traj = moment_trajectories(m, 1u, stencil);
        const auto center = test::snapshot_at(traj, 2, 3);
        for (int i = 0; i < 3; ++i) {
            const double fd =
                (traj.singles[0][i] - 8 * traj.singles[1][i] + 8 * traj.singles[3][i] -
                 traj.singles[4][i]) /
                (12 * h);
            CHECK(std::abs(fd - test::exact_single_derivative(k3, p, center, i)) <= 1e-6);
        }
    }
}

TEST_CASE("growth rate of reference systems") {
    const Graph g1(1, {});
    CHECK(exact_growth_rate(ExactModel(g1, ModelParams::homogeneous(1, 0.3, 1.0, 0.0))) ==
          doctest::Approx(-1.0).epsilon(1e-10));

    const Graph k2 = test::complete_graph(2);
    const double rho = exact_growth_rate(ExactModel(k2, ModelParams::homogeneous(2, 1.0, 1.0, 0.0)));
    CHECK(rho == doctest::Approx(std::sqrt(2.0) - 2.0).epsilon(1e-10));

    // The spectral bound at these parameters is beta - delta = 0; the
    // exact rate must stay below it.
    const double bound =
        lambda_max_metzler(build_moment_matrix(k2, ModelParams::homogeneous(2, 1.0, 1.0, 0.0)))
            .lambda_max;
    CHECK(bound == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rho <= bound + 1e-9);
}
