#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/dense_oracle.hpp"
#include "support/fixtures.hpp"
#include "synsis/exact.hpp"
#include "synsis/moments.hpp"
#include "synsis/spectral.hpp"

using namespace synsis;

TEST_CASE("single edge, zero synergy: eigenvalues are known in closed form") {
    const Graph k2 = test::complete_graph(2);
    const auto m = build_moment_matrix(k2, ModelParams::homogeneous(2, 0.5, 1.0, 0.0));
    const auto r = lambda_max_metzler(m);
    CHECK(r.lambda_max == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(r.residual <= 1e-9);
}

TEST_CASE("edgeless graph yields a diagonal matrix") {
    const Graph g(3, {});
    const auto m = build_moment_matrix(g, ModelParams::homogeneous(3, 0.5, 1.0, 0.01));
    const auto r = lambda_max_metzler(m);
    CHECK(r.lambda_max == -1.0);
    CHECK(r.iterations == 0);
}

TEST_CASE("karate at the extinct reference point is negative and matches the dense oracle") {
    const Graph g = load_edge_list(test::data_dir() + "/karate.edges");
    const auto m = build_moment_matrix(g, ModelParams::homogeneous(34, 0.02, 3.0, 0.01));
    REQUIRE(m.dim() == 595);
    const auto r = lambda_max_metzler(m, {1e-10, 100000, 1.0});
    CHECK(r.lambda_max < 0.0);
    const double oracle = test::dense_spectral_abscissa(m);
    CHECK(std::abs(r.lambda_max - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
}

TEST_CASE("adjacency eigenvalues of reference graphs") {
    CHECK(lambda_max_adjacency(test::complete_graph(3)).lambda_max ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(lambda_max_adjacency(test::star_graph(4)).lambda_max ==
          doctest::Approx(2.0).epsilon(1e-10));
    const Graph karate = load_edge_list(test::data_dir() + "/karate.edges");
    CHECK(lambda_max_adjacency(karate).lambda_max ==
          doctest::Approx(6.725697727631729).epsilon(1e-8));
}

TEST_CASE("conventional bound arithmetic") {
    CHECK(rho_sis_bar(0.02, 3.0, 6.7257) == doctest::Approx(-2.865486).epsilon(1e-9));
    CHECK(rho_sis_bar(0.0, 2.5, 10.0) == -2.5);
    CHECK(rho_sis_bar(0.5, 1.0, 2.0) == 0.0);
}

TEST_CASE("doubling the shift moves the result by at most twice the tolerance") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(5));
        const Graph g = test::random_graph(n, rng);
        const auto p = test::random_params(static_cast<std::size_t>(n), rng, 0.05, 2.0);
        const auto m = build_moment_matrix(g, p);
        const double tol = 1e-9;
        const auto a = lambda_max_metzler(m, {tol, 100000, 1.0});
        const auto b = lambda_max_metzler(m, {tol, 100000, 2.0});
        const double scale = std::max({1.0, std::abs(a.lambda_max) + a.shift_used});
        CHECK(std::abs(a.lambda_max - b.lambda_max) <= 2 * tol * scale);
    }
}

TEST_CASE("agreement with the dense oracle on random instances") {
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(8));
        const Graph g = test::random_graph(n, rng);
        const auto p = test::random_params(static_cast<std::size_t>(n), rng, 0.05, 1.0);
        const auto m = build_moment_matrix(g, p);
        const auto r = lambda_max_metzler(m, {1e-11, 200000, 1.0});
        const double oracle = test::dense_spectral_abscissa(m);
        CHECK(std::abs(r.lambda_max - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("the exact growth rate never exceeds the bound") {
    Rng rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_below(3));
        const Graph g = test::random_graph(n, rng);
        const auto p = test::random_params(static_cast<std::size_t>(n), rng, 0.0, 2.0);
        const double rho = exact_growth_rate(ExactModel(g, p));
        const double bound =
            lambda_max_metzler(build_moment_matrix(g, p), {1e-11, 200000, 1.0}).lambda_max;
        CHECK(rho <= bound + 1e-9);
    }
}

TEST_CASE("zero synergy keeps the bound at or above the conventional one") {
    const Graph karate = load_edge_list(test::data_dir() + "/karate.edges");
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const double beta = 0.01 + rng.uniform() * 0.2;
        const double delta = 0.05 + rng.uniform() * 3.0;
        const auto m = build_moment_matrix(karate, ModelParams::homogeneous(34, beta, delta, 0.0));
        const double lam = lambda_max_metzler(m).lambda_max;
        const double lam_a = lambda_max_adjacency(karate).lambda_max;
        CHECK(lam >= rho_sis_bar(beta, delta, lam_a) - 1e-7);
    }
}

TEST_CASE("non-convergence raises an explicit error carrying the last estimate") {
    const Graph karate = load_edge_list(test::data_dir() + "/karate.edges");
    const auto m = build_moment_matrix(karate, ModelParams::homogeneous(34, 0.02, 3.0, 0.01));
    CHECK_THROWS_AS(lambda_max_metzler(m, {1e-12, 3, 1.0}), ConvergenceError);
    try {
        lambda_max_metzler(m, {1e-12, 3, 1.0});
    } catch (const ConvergenceError& e) {
        CHECK(e.iterations == 3);
        CHECK(std::isfinite(e.last_estimate));
    }
}

TEST_CASE("non-Metzler input is a contract error") {
    // Hand-built 2x2 with a negative off-diagonal entry.
    MomentMatrix bad(2, {0, 2, 3}, {0, 1, 1}, {-1.0, -0.5, -1.0});
    CHECK(!bad.is_metzler());
    CHECK_THROWS_AS(lambda_max_metzler(bad), std::invalid_argument);
    CHECK_THROWS_AS(lambda_max_metzler(bad, {0.0, 10, 1.0}), std::invalid_argument);
}

TEST_CASE("empty graph is rejected for adjacency eigenvalues") {
    CHECK_THROWS_AS(lambda_max_adjacency(Graph(0, {})), std::invalid_argument);
}
