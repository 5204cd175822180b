#include "synsis/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace synsis {

void SimConfig::validate(std::size_t num_nodes) const {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("sim: horizon must be positive and finite");
    if (burn_in < 0.0 || burn_in >= horizon)
        throw std::invalid_argument("sim: burn-in must lie in [0, horizon)");
    if (!reinfect && initial_infected.empty())
        throw std::invalid_argument("sim: initial infected set must be nonempty when re-infection is off");
    for (int i : initial_infected)
        if (i < 0 || static_cast<std::size_t>(i) >= num_nodes)
            throw std::invalid_argument("sim: initial infected node out of range");
    double prev = 0.0;
    for (double t : sample_times) {
        if (t < prev || t > horizon)
            throw std::invalid_argument("sim: sample times must be nondecreasing within [0, horizon]");
        prev = t;
    }
}

Simulator::Simulator(const Graph& g, const ModelParams& p, EpidemicState initial)
    : graph_(g), params_(p), state_(std::move(initial)) {
    p.validate(g.num_nodes());
    if (state_.size() != g.num_nodes())
        throw std::invalid_argument("sim: state size does not match graph");
    infected_neighbors_.assign(g.num_nodes(), 0);
    rate_.assign(g.num_nodes(), 0.0);
    refresh();
}

void Simulator::refresh() {
    const auto n = static_cast<int>(graph_.num_nodes());
    total_ = 0.0;
    for (int j = 0; j < n; ++j)
        infected_neighbors_[j] = infected_neighbor_count(graph_, state_, j, j);
    for (int u = 0; u < n; ++u) {
        if (state_.infected(u)) {
            rate_[u] = params_.delta[u];
        } else {
            double r = params_.beta[u] * infected_neighbors_[u];
            for (int j : graph_.neighbors(u))
                if (state_.infected(j))
                    r += params_.gamma[j] * infected_neighbors_[j];
            rate_[u] = r;
        }
        total_ += rate_[u];
    }
    events_since_refresh_ = 0;
}

void Simulator::set_rate(int u, double r) {
    total_ += r - rate_[u];
    rate_[u] = r;
}

void Simulator::bump_rate(int u, double delta) {
    total_ += delta;
    rate_[u] += delta;
}

void Simulator::apply_infection(int v) {
    state_.infect(v);
    for (int j : graph_.neighbors(v))
        ++infected_neighbors_[j];
    // Direct term beta_u plus v's new synergy contribution gamma_v * m_v
    // for susceptible neighbors of v.
    const double synergy_v = params_.gamma[v] * infected_neighbors_[v];
    for (int u : graph_.neighbors(v)) {
        if (!state_.infected(u))
            bump_rate(u, params_.beta[u] + synergy_v);
    }
    // m_j grew by one for every infected neighbor j of v, raising the
    // synergy term gamma_j in the rates of j's susceptible neighbors.
    for (int j : graph_.neighbors(v)) {
        if (!state_.infected(j))
            continue;
        for (int u : graph_.neighbors(j))
            if (!state_.infected(u))
                bump_rate(u, params_.gamma[j]);
    }
    set_rate(v, params_.delta[v]);
}

void Simulator::apply_recovery(int v) {
    state_.recover(v);
    for (int j : graph_.neighbors(v))
        --infected_neighbors_[j];
    const double synergy_v = params_.gamma[v] * infected_neighbors_[v];
    for (int u : graph_.neighbors(v)) {
        if (!state_.infected(u) && u != v)
            bump_rate(u, -(params_.beta[u] + synergy_v));
    }
    for (int j : graph_.neighbors(v)) {
        if (!state_.infected(j))
            continue;
        for (int u : graph_.neighbors(j))
            if (!state_.infected(u) && u != v)
                bump_rate(u, -params_.gamma[j]);
    }
    // v's own rate is rebuilt from scratch as a fresh susceptible node.
    double r = params_.beta[v] * infected_neighbors_[v];
    for (int j : graph_.neighbors(v))
        if (state_.infected(j))
            r += params_.gamma[j] * infected_neighbors_[j];
    set_rate(v, r);
    // At extinction every true rate is zero; clear accumulated drift so
    // the absorbing state is exact.
    if (state_.infected_count() == 0)
        refresh();
}

void Simulator::force_infect(int v) {
    if (state_.infected(v))
        throw std::logic_error("sim: force_infect on an infected node");
    apply_infection(v);
}

double Simulator::draw_waiting_time(Rng& rng) {
    return rng.exponential(total_);
}

Step Simulator::apply_next_event(Rng& rng) {
    double r = rng.uniform() * total_;
    const auto n = static_cast<int>(graph_.num_nodes());
    int selected = -1;
    for (int u = 0; u < n; ++u) {
        r -= rate_[u];
        if (r < 0.0) {
            selected = u;
            break;
        }
    }
    if (selected < 0) {
        // Accumulated float drift; resynchronize and take the last active node.
        refresh();
        for (int u = n - 1; u >= 0; --u)
            if (rate_[u] > 0.0) {
                selected = u;
                break;
            }
        if (selected < 0)
            throw std::logic_error("sim: event requested with zero total rate");
    }

    EventKind kind;
    if (state_.infected(selected)) {
        apply_recovery(selected);
        kind = EventKind::recover;
    } else {
        apply_infection(selected);
        kind = EventKind::infect;
    }
    if (++events_since_refresh_ >= 4096)
        refresh();
    return Step{0.0, selected, kind};
}

std::optional<Step> Simulator::step(Rng& rng) {
    if (state_.infected_count() == 0 || total_ <= 0.0)
        return std::nullopt;
    const double dt = draw_waiting_time(rng);
    Step s = apply_next_event(rng);
    s.waiting_time = dt;
    return s;
}

namespace {

/// Walks one trajectory to the horizon. `observe(begin, end)` fires once
/// per constant segment while the simulator still holds that segment's
/// state; the final segment is closed at the horizon. Returns the result
/// with time_average/metastable/reinfection_count/event_log filled in.
template <typename Observe>
SimResult run_trajectory(const Graph& g, const SimConfig& config, Simulator& sim, Rng& rng,
                         Observe&& observe) {
    SimResult result;
    double t = 0.0;
    double integral = 0.0;

    auto account = [&](double begin, double end) {
        observe(begin, end);
        const double lo = std::max(begin, config.burn_in);
        if (end > lo)
            integral += sim.infected_count() * (end - lo);
    };

    while (t < config.horizon) {
        if (sim.infected_count() == 0) {
            if (!config.reinfect) {
                account(t, config.horizon);
                break;
            }
            const int node = static_cast<int>(rng.uniform_below(g.num_nodes()));
            sim.force_infect(node);
            ++result.reinfection_count;
            if (config.record_events)
                result.event_log.push_back({t, node, EventKind::reinfect});
            continue;
        }
        if (sim.total_rate() <= 0.0) {
            // Frozen: infected nodes remain but no transition can fire.
            account(t, config.horizon);
            break;
        }
        const double t_next = t + sim.draw_waiting_time(rng);
        if (t_next >= config.horizon) {
            account(t, config.horizon);
            break;
        }
        account(t, t_next);
        const Step step = sim.apply_next_event(rng);
        if (config.record_events)
            result.event_log.push_back({t_next, step.node, step.kind});
        t = t_next;
    }

    result.time_average = integral / (config.horizon - config.burn_in);
    result.metastable = result.time_average - 1.0;
    return result;
}

/// True when sample time s falls in the segment [begin, end); segments
/// ending at the horizon also cover s == horizon.
bool covers(double s, double begin, double end, double horizon) {
    return s >= begin && (s < end || end >= horizon);
}

} // namespace

SimResult run(const Graph& g, const ModelParams& p, const SimConfig& config) {
    config.validate(g.num_nodes());
    Simulator sim(g, p, EpidemicState::from_infected_set(g.num_nodes(), config.initial_infected));
    Rng rng(config.seed);

    std::vector<int> samples(config.sample_times.size(), 0);
    std::size_t next_sample = 0;
    SimResult result = run_trajectory(g, config, sim, rng, [&](double begin, double end) {
        while (next_sample < config.sample_times.size() &&
               covers(config.sample_times[next_sample], begin, end, config.horizon)) {
            samples[next_sample++] = sim.infected_count();
        }
    });
    result.samples = std::move(samples);
    return result;
}

ProbabilityEstimate estimate_infection_probabilities(const Graph& g, const ModelParams& p,
                                                     const SimConfig& config, std::int64_t runs) {
    config.validate(g.num_nodes());
    if (runs < 1)
        throw std::invalid_argument("sim: need at least one run");
    if (config.reinfect)
        throw std::invalid_argument("sim: probability estimation requires re-infection off");
    if (config.sample_times.empty())
        throw std::invalid_argument("sim: probability estimation requires sample times");

    const std::size_t n = g.num_nodes();
    const std::size_t nt = config.sample_times.size();
    std::vector<std::vector<std::int64_t>> hits(nt, std::vector<std::int64_t>(n, 0));

    for (std::int64_t r = 0; r < runs; ++r) {
        Simulator sim(g, p, EpidemicState::from_infected_set(n, config.initial_infected));
        Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(r)));
        std::size_t next_sample = 0;
        run_trajectory(g, config, sim, rng, [&](double begin, double end) {
            while (next_sample < nt &&
                   covers(config.sample_times[next_sample], begin, end, config.horizon)) {
                const auto& x = sim.state().indicator();
                for (std::size_t i = 0; i < n; ++i)
                    hits[next_sample][i] += x[i];
                ++next_sample;
            }
        });
    }

    ProbabilityEstimate est;
    est.times = config.sample_times;
    est.runs = runs;
    est.mean.assign(nt, std::vector<double>(n, 0.0));
    est.standard_error.assign(nt, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < nt; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const double m = static_cast<double>(hits[k][i]) / static_cast<double>(runs);
            est.mean[k][i] = m;
            est.standard_error[k][i] = std::sqrt(m * (1.0 - m) / static_cast<double>(runs));
        }
    return est;
}

void write_event_log(std::ostream& out, const Graph& g, const std::vector<Event>& events) {
    char buf[64];
    for (const auto& e : events) {
        std::snprintf(buf, sizeof(buf), "%.9g", e.time);
        const char* kind = e.kind == EventKind::infect    ? "infect"
                           : e.kind == EventKind::recover ? "recover"
                                                          : "reinfect";
        out << buf << ',' << g.label(e.node) << ',' << kind << '\n';
    }
}

} // namespace synsis
