#include "synsis/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "synsis/moments.hpp"

namespace synsis {

void SweepGrid::validate() const {
    if (delta_values.empty() || beta_values.empty())
        throw std::invalid_argument("sweep: axis value lists must be nonempty");
    auto check_axis = [](const std::vector<double>& v, const char* name) {
        double prev = 0.0;
        for (double x : v) {
            if (!(x > 0.0) || !std::isfinite(x))
                throw std::invalid_argument(std::string("sweep: ") + name + " values must be positive");
            if (x <= prev)
                throw std::invalid_argument(std::string("sweep: ") + name + " values must be increasing");
            prev = x;
        }
    };
    check_axis(delta_values, "delta");
    check_axis(beta_values, "beta");
    if (gamma < 0.0 || !std::isfinite(gamma))
        throw std::invalid_argument("sweep: gamma must be finite and nonnegative");
    if (runs_per_cell < 1)
        throw std::invalid_argument("sweep: need at least one run per cell");
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw std::invalid_argument("sweep: log axis needs 0 < lo < hi and at least two points");
    std::vector<double> v(count);
    const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k)
        v[k] = std::exp(std::log(lo) + step * static_cast<double>(k));
    v.front() = lo;
    v.back() = hi;
    return v;
}

namespace {

SweepCell evaluate_cell(const Graph& g, const SweepGrid& grid, double lambda_a,
                        std::size_t cell_index, double delta, double beta) {
    SweepCell cell;
    cell.delta = delta;
    cell.beta = beta;

    const auto params = ModelParams::homogeneous(g.num_nodes(), beta, delta, grid.gamma);
    cell.lambda_m = lambda_max_metzler(build_moment_matrix(g, params), grid.solver).lambda_max;
    cell.rho_sis = rho_sis_bar(beta, delta, lambda_a);

    SimConfig config = grid.sim;
    config.reinfect = true;
    if (config.initial_infected.empty()) {
        config.initial_infected.resize(g.num_nodes());
        std::iota(config.initial_infected.begin(), config.initial_infected.end(), 0);
    }
    double sum = 0.0;
    for (std::int64_t r = 0; r < grid.runs_per_cell; ++r) {
        config.seed = mix_seed(grid.sim.seed,
                               static_cast<std::uint64_t>(cell_index) * 0x10001ULL +
                                   static_cast<std::uint64_t>(r));
        sum += run(g, params, config).metastable;
    }
    cell.y_star = sum / static_cast<double>(grid.runs_per_cell);

    cell.in_e = cell.y_star < 1.0;
    cell.in_e_lower = cell.lambda_m < 0.0;
    cell.in_e_sis = cell.rho_sis < 0.0;
    return cell;
}

} // namespace

std::vector<SweepCell> run_sweep(const Graph& g, const SweepGrid& grid, int threads) {
    grid.validate();
    const double lambda_a = lambda_max_adjacency(g, grid.solver).lambda_max;

    const std::size_t nd = grid.delta_values.size();
    const std::size_t nb = grid.beta_values.size();
    std::vector<SweepCell> cells(nd * nb);

    if (threads <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        threads = hw ? static_cast<int>(hw) : 1;
    }
    threads = std::min<int>(threads, static_cast<int>(cells.size()));

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= cells.size())
                return;
            try {
                cells[c] = evaluate_cell(g, grid, lambda_a, c, grid.delta_values[c / nb],
                                         grid.beta_values[c % nb]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(cells.size());
                return;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    // Entrywise dominance of the moment matrix makes the bound monotone
    // along the axes; a violation beyond solver noise means the eigensolve
    // went wrong for some cell.
    const double slack = 1e-6;
    for (std::size_t d = 0; d < nd; ++d)
        for (std::size_t b = 0; b + 1 < nb; ++b)
            if (cells[d * nb + b].lambda_m > cells[d * nb + b + 1].lambda_m + slack)
                throw std::runtime_error("sweep: bound not monotone in beta at delta index " +
                                         std::to_string(d));
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t d = 0; d + 1 < nd; ++d)
            if (cells[(d + 1) * nb + b].lambda_m > cells[d * nb + b].lambda_m + slack)
                throw std::runtime_error("sweep: bound not monotone in delta at beta index " +
                                         std::to_string(b));
    return cells;
}

std::vector<BoundaryColumn> classify_boundaries(const std::vector<SweepCell>& cells) {
    std::vector<double> deltas;
    std::vector<double> betas;
    for (const auto& c : cells) {
        if (deltas.empty() || deltas.back() != c.delta)
            deltas.push_back(c.delta);
        if (std::find(betas.begin(), betas.end(), c.beta) == betas.end())
            betas.push_back(c.beta);
    }
    const std::size_t nd = deltas.size();
    const std::size_t nb = betas.size();
    if (cells.size() != nd * nb)
        throw std::invalid_argument("sweep: cells do not form a complete grid");
    for (std::size_t d = 0; d < nd; ++d)
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& c = cells[d * nb + b];
            if (c.delta != deltas[d] || c.beta != betas[b])
                throw std::invalid_argument("sweep: cells are not in row-major grid order");
        }

    std::vector<BoundaryColumn> out(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        out[d].delta = deltas[d];
        for (std::size_t b = 0; b < nb; ++b) {
            const auto& c = cells[d * nb + b];
            if (c.in_e)
                out[d].beta_e = c.beta;
            if (c.in_e_lower)
                out[d].beta_e_lower = c.beta;
            if (c.in_e_sis)
                out[d].beta_e_sis = c.beta;
        }
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "delta,beta,y_star,lambda_M,rho_sis,in_E,in_E_lower,in_E_sis\n";
    char buf[160];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%d", c.delta, c.beta,
                      c.y_star, c.lambda_m, c.rho_sis, c.in_e ? 1 : 0, c.in_e_lower ? 1 : 0,
                      c.in_e_sis ? 1 : 0);
        out << buf << '\n';
    }
}

} // namespace synsis
