#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "modechoice/config.hpp"
#include "modechoice/social_network.hpp"
#include "modechoice/types.hpp"

namespace modechoice {

/// Kernel selection. Parallel runs the per-agent evaluation loop under
/// OpenMP; results are bit-identical to Serial because every agent draws
/// from its own derived stream and the merge is id-ordered.
enum class ExecMode { Serial, Parallel };

struct IndicatorSnapshot {
    int period = 0; // 0 = initial state, then one row per decision period
    int tick = 0;
    int year = 0; // calendar year
    std::array<double, kNumModes> shares{};
    double avg_travel_time_min = 0.0;
    double avg_speed_kmh = 0.0;
    double co2_total_kg = 0.0;
    double accidents_per_100k = 0.0;
    std::array<int, kNumStrategies> strategy_counts{};
};

/// BPR congestion term alpha*(V/C)^beta, scaled by gamma_moto for
/// motorcycles (lane filtering).
double congestion_factor(ModeId mode, double vc_ratio, const ModesConfig& cfg);

/// BPR-style congested door-to-door time in minutes. weighted_private_count
/// is the passenger-car-equivalent vehicle count V; capacity is C.
/// Motorcycles see the congestion term scaled by gamma_moto (lane
/// filtering); public transit adds half the headway as waiting time.
double congested_travel_time_min(ModeId mode, double distance_km, double weighted_private_count,
                                 double capacity, const ModesConfig& cfg);

/// Per-attribute satisfaction in [0,1] for one agent/mode pair, given the
/// door-to-door time for the agent's commute distance.
AttrVec attribute_satisfaction(const Agent& agent, ModeId mode, const ModeState& state,
                               double travel_time_min, const ModesConfig& cfg);

/// Aggregates system indicators from per-agent travel times for the modes
/// currently in use. Shares and strategy counts are filled by the caller.
void compute_indicators(std::span<const Agent> agents, std::span<const double> travel_time_min,
                        const ModesConfig& cfg, IndicatorSnapshot& out);

/// One replication of the simulated city. The period loop is sequential;
/// within a period agent evaluation is embarrassingly parallel over a
/// read-only view of the prior state (synchronous CONSUMAT update).
class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, std::uint64_t rep_seed);
    Simulation(const ScenarioConfig& cfg, std::uint64_t rep_seed, std::vector<Agent> agents,
               SocialGraph graph);

    /// Indicator row for the initial state (period 0). Does not advance time;
    /// by convention the whole population counts as Repeat.
    IndicatorSnapshot measure_initial();

    /// Simulates ticks_per_period commuting ticks plus one synchronous
    /// decision round. Shares in the returned snapshot reflect the modes
    /// chosen at the end of the period; travel indicators reflect the period
    /// as experienced.
    IndicatorSnapshot step_period(ExecMode exec);

    int period() const { return period_; }
    int tick() const { return tick_; }
    const std::vector<Agent>& agents() const { return agents_; }
    const SocialGraph& graph() const { return graph_; }

    /// First-time vehicle acquisitions per completed period (car and
    /// motorcycle entries; public transit needs no acquisition and stays 0).
    const std::vector<std::array<int, kNumModes>>& acquisitions() const { return acquisitions_; }

    /// Convenience: full snapshot series (period 0 row + one per year).
    static std::vector<IndicatorSnapshot> run_replication(const ScenarioConfig& cfg,
                                                          std::uint64_t rep_seed, ExecMode exec,
                                                          std::vector<std::array<int, kNumModes>>*
                                                              acquisitions_out = nullptr);

    /// Period-constant congestion state shared by every agent evaluation.
    struct PeriodState {
        const ModesConfig* modes;
        std::array<double, kNumModes> minutes_per_km; // congested pace per mode
        std::array<double, kNumModes> wait_min;       // headway/2 for public
    };

private:
    struct AgentDecision {
        ModeId new_mode;
        StrategyKind strategy;
        double travel_time_min;
    };

    AgentDecision evaluate_agent(int i, const PeriodState& period, int decision_period) const;

    ScenarioConfig cfg_;
    std::uint64_t rep_seed_;
    std::vector<Agent> agents_;
    SocialGraph graph_;
    std::vector<std::array<int, kNumModes>> acquisitions_;
    int period_ = 0;
    int tick_ = 0;
};

} // namespace modechoice
