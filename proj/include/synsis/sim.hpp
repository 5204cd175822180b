#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "synsis/graph.hpp"
#include "synsis/model.hpp"
#include "synsis/rng.hpp"

namespace synsis {

enum class EventKind { infect, recover, reinfect };

struct Event {
    double time;
    int node;
    EventKind kind;
};

struct SimConfig {
    double horizon = 1e4;       // total simulated time
    std::uint64_t seed = 1;
    bool reinfect = true;       // re-infect a random node whenever the process dies
    std::vector<int> initial_infected;
    std::vector<double> sample_times;  // sorted observation instants in [0, horizon]
    double burn_in = 0.0;       // discarded from the time average; default none
    bool record_events = false;

    void validate(std::size_t num_nodes) const;
};

struct SimResult {
    double time_average = 0.0;  // y(T): time average of the infected count
    double metastable = 0.0;    // y* = y(T) - 1
    std::int64_t reinfection_count = 0;
    std::vector<int> samples;   // infected count at each sample time
    std::vector<Event> event_log;  // populated when record_events is set
};

/// One jump of the continuous-time chain, for stepping by hand.
struct Step {
    double waiting_time;
    int node;
    EventKind kind;
};

/// Exact event-driven simulator of the synergistic SIS chain. Event rates
/// are maintained incrementally: flipping node v only perturbs infection
/// rates of susceptible nodes within two hops of v, so each event costs
/// O(sum of neighbor degrees) instead of a full recompute.
///
/// Single-writer: one Simulator drives one trajectory; independent runs
/// can execute in parallel on their own instances.
class Simulator {
public:
    Simulator(const Graph& g, const ModelParams& p, EpidemicState initial);

    const EpidemicState& state() const { return state_; }
    int infected_count() const { return state_.infected_count(); }

    /// Total event rate R of the current state.
    double total_rate() const { return total_; }

    /// Samples the waiting time ~ Exponential(R) and the event (recovery
    /// of infected i w.p. delta_i/R, infection of susceptible i w.p.
    /// rate_i/R), applies it, and returns it. Returns nullopt when R = 0:
    /// either the chain is extinct or no further transition is possible.
    std::optional<Step> step(Rng& rng);

    /// Split phases of step(), for callers that must observe the state
    /// between the waiting-time draw and the event. Require R > 0.
    double draw_waiting_time(Rng& rng);
    Step apply_next_event(Rng& rng);  // waiting_time field is left 0

    /// Exogenous infection (the re-infection procedure).
    void force_infect(int v);

private:
    void apply_infection(int v);
    void apply_recovery(int v);
    void set_rate(int u, double r);
    void bump_rate(int u, double delta);
    void refresh();

    const Graph& graph_;
    const ModelParams& params_;
    EpidemicState state_;
    std::vector<int> infected_neighbors_;  // m_j for every node j
    std::vector<double> rate_;             // delta_i if infected, infection rate if susceptible
    double total_ = 0.0;
    std::int64_t events_since_refresh_ = 0;
};

/// Simulates one trajectory to the horizon. The infected-count integral is
/// accumulated exactly between events (piecewise-constant integrand). On
/// extinction with reinfect on, a uniformly random node is infected at the
/// extinction instant and the run continues. Deterministic given the seed.
SimResult run(const Graph& g, const ModelParams& p, const SimConfig& config);

struct ProbabilityEstimate {
    std::vector<double> times;
    std::vector<std::vector<double>> mean;           // [time][node]
    std::vector<std::vector<double>> standard_error; // binomial, [time][node]
    std::int64_t runs = 0;
};

/// Monte-Carlo estimate of the per-node infection probabilities p_i(t) at
/// the configured sample times, over `runs` independently seeded
/// trajectories (seeds derived from config.seed). Requires reinfect off.
ProbabilityEstimate estimate_infection_probabilities(const Graph& g, const ModelParams& p,
                                                     const SimConfig& config, std::int64_t runs);

/// Event log as CSV: "time,node_label,event" per line, no header.
void write_event_log(std::ostream& out, const Graph& g, const std::vector<Event>& events);

} // namespace synsis
