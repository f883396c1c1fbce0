#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modechoice/config.hpp"
#include "modechoice/environment.hpp"

namespace modechoice {

struct BatchOptions {
    int reps_override = 0;          // > 0 replaces cfg.simulation.reps
    bool seed_overridden = false;
    std::uint64_t master_seed = 0;  // used when seed_overridden
    int jobs = 1;                   // parallel replications
    int years_override = 0;         // > 0 replaces cfg.simulation.years
};

/// Full batch output: one snapshot series per replication plus metadata.
/// Aggregation folds replications in rep-id order, so results are identical
/// no matter which order replications actually executed in.
struct RunResult {
    std::vector<std::vector<IndicatorSnapshot>> series;                     // [rep][period]
    std::vector<std::vector<std::array<int, kNumModes>>> acquisitions;     // [rep][period][mode]
    std::vector<std::uint64_t> rep_seeds;
    std::vector<double> runtime_ms;
    int years = 0;
    std::uint64_t master_seed = 0;
};

/// Replication seed for (master_seed, rep index); the same in serial and
/// parallel execution.
std::uint64_t replication_seed(std::uint64_t master_seed, int rep_index);

RunResult run_batch(const ScenarioConfig& cfg, const BatchOptions& options = {});

/// Names accepted wherever an indicator column is referenced.
extern const std::array<const char*, 11> kIndicatorNames;
double snapshot_indicator(const IndicatorSnapshot& snap, const std::string& name);

struct AggregateRow {
    int period;
    int year;
    std::string indicator;
    double mean;
    double ci_low;
    double ci_high;
};

/// Per-period mean and 95% t-interval for every indicator.
std::vector<AggregateRow> aggregate(const RunResult& result, double level = 0.95);

struct CvCheckResult {
    int recommended_reps;
    bool stabilized;
    std::vector<double> cv_trace; // cv_trace[r-2] = CV over the first r replications
};

/// Smallest r >= 10 whose coefficient of variation of the indicator's
/// terminal value moved less than tol over 5 consecutive increments;
/// max_reps (with stabilized=false) if that never happens.
CvCheckResult cv_stabilization(const ScenarioConfig& cfg, const std::string& indicator,
                               int max_reps, double tol);

/// Writes timeseries.csv, aggregate.csv and meta.json into dir.
void export_results(const ScenarioConfig& cfg, const RunResult& result, const std::string& dir,
                    const std::string& scenario_name);

void write_timeseries_csv(const RunResult& result, const std::string& scenario_name,
                          std::ostream& os);
void write_aggregate_csv(std::span<const AggregateRow> rows, std::ostream& os);
std::string meta_json(const ScenarioConfig& cfg, const RunResult& result,
                      const std::string& scenario_name);

} // namespace modechoice
