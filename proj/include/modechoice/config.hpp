#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modechoice/types.hpp"

namespace modechoice {

/// Parsed distribution specification, e.g. "truncnorm 0.55 0.1 0.05 0.95".
/// Supported forms:
///   const <v>
///   uniform <lo> <hi>
///   truncnorm <mean> <sd> <lo> <hi>
///   lognormal <median> <sigma>
struct DistSpec {
    enum class Kind { Const, Uniform, TruncNormal, LogNormal };
    Kind kind = Kind::Const;
    double a = 0.0; // value / lo / mean / median
    double b = 0.0; // - / hi / sd / sigma
    double lo = 0.0;
    double hi = 0.0;

    static DistSpec constant(double v);
    static DistSpec parse(const std::string& text, const std::string& where);
    std::string describe() const;
    double sample(class RngStream& rng) const;
};

struct SimulationConfig {
    int years = 10;             // decision periods in a replication
    int reps = 80;
    std::uint64_t master_seed = 20220901ULL;
    int ticks_per_period = 30;  // one tick = 2 minutes of a peak hour
    int start_calendar_year = 2022;
    bool parallel_kernels = true; // OpenMP agent loop; serial path always available
};

struct PolicyIntervention {
    enum class Kind { FareFree, FrequencyBoost, SecurityImprovement };
    Kind kind = Kind::FareFree;
    double magnitude = 0.0; // FareFree: fare multiplier; FrequencyBoost: headway
                            // multiplier; SecurityImprovement: additive delta
    int start_year = 0;
};

const char* policy_kind_name(PolicyIntervention::Kind k);
PolicyIntervention::Kind parse_policy_kind(const std::string& name);
double default_policy_magnitude(PolicyIntervention::Kind k);

struct PopulationConfig {
    int n_agents = 10000;
    double city_population = 2.2e6; // scaling anchor for per-capita outputs
    std::array<double, kNumSes> ses_shares{0.35, 0.45, 0.20};
    std::array<double, 2> sex_shares{0.5, 0.5}; // F, M
    std::array<double, 3> age_band_shares{0.30, 0.52, 0.18}; // 16-29 / 30-59 / 60+
    int age_min = 16;
    int age_max = 80;
    std::array<DistSpec, kNumSes> income; // monthly income per SES
    DistSpec distance;                    // commute distance, km
    // P(mode | ses, sex, age band), rows sum to 1. Order: car, moto, pub.
    std::array<std::array<std::array<std::array<double, kNumModes>, 3>, 2>, kNumSes> init_mode_probs{};
    std::array<WeightVec, kNumSes> weight_means{};
    std::array<WeightVec, kNumSes> weight_sds{};
    DistSpec sat_threshold;
    DistSpec unc_threshold;
    DistSpec uncertainty_avoidance;
    DistSpec collectivism;
};

struct ModesConfig {
    ModeState car;
    ModeState moto;
    ModeState pub;
    double bpr_alpha = 0.15;
    double bpr_beta = 4.0;
    double gamma_moto = 0.5;   // congestion sensitivity multiplier (lane filtering)
    double pce_moto = 0.5;     // passenger-car equivalent of one motorcycle
    double capacity_per_agent = 0.75; // road capacity C = capacity_per_agent * n_agents
    double time_min = 10.0;    // minutes mapped to x_time = 1
    double time_max = 90.0;   // minutes mapped to x_time = 0
    double opcost_income_share = 0.3;  // phi
    double accost_income_ratio = 5.0;  // psi
    double risk_max = 60.0;            // accidents per 100M km mapped to x_safety = 0
    double gpkm_max = 250.0;           // g/km mapped to x_emissions = 0
    double bus_occupancy = 40.0;
    double trips_per_year = 500.0;
    double k_car = 0.5;   // car affordable when price <= k_car * annual income
    double k_moto = 0.15;

    const ModeState& state(ModeId m) const {
        switch (m) {
            case ModeId::Car: return car;
            case ModeId::Motorcycle: return moto;
            default: return pub;
        }
    }
    ModeState& state(ModeId m) {
        switch (m) {
            case ModeId::Car: return car;
            case ModeId::Motorcycle: return moto;
            default: return pub;
        }
    }
};

struct NetworkConfig {
    int m = 2;              // edges attached per newcomer
    double homophily = 0.7; // h in [0,1]
    double bonus = 3.0;     // same-SES attachment bonus factor B
};

struct ConsumatConfig {
    double experience_lambda = 0.8; // e' = lambda*e + (1-lambda)*used
};

struct ScenarioConfig {
    std::string name = "scenario";
    SimulationConfig simulation;
    PopulationConfig population;
    NetworkConfig network;
    ModesConfig modes;
    ConsumatConfig consumat;
    std::vector<PolicyIntervention> policies;

    /// All defaults, no file. The shipped cali-default scenario equals this.
    static ScenarioConfig defaults();

    /// Parse + schema-validate scenario text. Unknown sections/keys are
    /// rejected with their path; all fields are defaulted.
    static ScenarioConfig parse(const std::string& text, const std::string& name);
    static ScenarioConfig load(const std::string& path);

    void validate() const; // throws ConfigError naming the offending field

    /// Deterministic full dump of every field; input to config_hash().
    std::string canonical() const;
    std::uint64_t config_hash() const;
};

} // namespace modechoice
