#include "modechoice/harness.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "modechoice/fmt.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/stats.hpp"

namespace modechoice {

std::uint64_t replication_seed(std::uint64_t master_seed, int rep_index) {
    return RngStream::derive_key(master_seed,
                                 {rng_tag::replication, static_cast<std::uint64_t>(rep_index)});
}

RunResult run_batch(const ScenarioConfig& cfg_in, const BatchOptions& options) {
    ScenarioConfig cfg = cfg_in;
    if (options.reps_override > 0) cfg.simulation.reps = options.reps_override;
    if (options.years_override > 0) cfg.simulation.years = options.years_override;
    if (options.seed_overridden) cfg.simulation.master_seed = options.master_seed;
    cfg.validate();

    const int reps = cfg.simulation.reps;
    const ExecMode exec = cfg.simulation.parallel_kernels ? ExecMode::Parallel : ExecMode::Serial;

    RunResult result;
    result.series.resize(static_cast<std::size_t>(reps));
    result.acquisitions.resize(static_cast<std::size_t>(reps));
    result.rep_seeds.resize(static_cast<std::size_t>(reps));
    result.runtime_ms.resize(static_cast<std::size_t>(reps));
    result.years = cfg.simulation.years;
    result.master_seed = cfg.simulation.master_seed;
    for (int r = 0; r < reps; ++r)
        result.rep_seeds[static_cast<std::size_t>(r)] = replication_seed(cfg.simulation.master_seed, r);

    std::exception_ptr failure = nullptr;
    int failed_rep = -1;

    auto run_one = [&](int r) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<std::array<int, kNumModes>> acq;
        result.series[static_cast<std::size_t>(r)] =
            Simulation::run_replication(cfg, result.rep_seeds[static_cast<std::size_t>(r)], exec, &acq);
        result.acquisitions[static_cast<std::size_t>(r)] = std::move(acq);
        auto t1 = std::chrono::steady_clock::now();
        result.runtime_ms[static_cast<std::size_t>(r)] =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
    };

#ifdef _OPENMP
    if (options.jobs > 1 && reps > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(options.jobs)
        for (int r = 0; r < reps; ++r) {
            try {
                run_one(r);
            } catch (...) {
#pragma omp critical
                if (!failure) {
                    failure = std::current_exception();
                    failed_rep = r;
                }
            }
        }
    } else
#endif
    {
        for (int r = 0; r < reps; ++r) {
            try {
                run_one(r);
            } catch (...) {
                failure = std::current_exception();
                failed_rep = r;
                break;
            }
        }
    }

    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const std::exception& e) {
            throw std::runtime_error(
                "replication " + std::to_string(failed_rep) + " (seed " +
                std::to_string(result.rep_seeds[static_cast<std::size_t>(failed_rep)]) +
                ") failed: " + e.what());
        }
    }
    return result;
}

const std::array<const char*, 11> kIndicatorNames = {
    "share_car",  "share_moto", "share_pub",          "avg_time_min",
    "avg_speed_kmh", "co2_kg",  "accidents_per_100k", "n_repeat",
    "n_imitate",  "n_inquire",  "n_deliberate"};

double snapshot_indicator(const IndicatorSnapshot& s, const std::string& name) {
    if (name == "share_car") return s.shares[static_cast<int>(ModeId::Car)];
    if (name == "share_moto") return s.shares[static_cast<int>(ModeId::Motorcycle)];
    if (name == "share_pub") return s.shares[static_cast<int>(ModeId::PublicTransit)];
    if (name == "avg_time_min") return s.avg_travel_time_min;
    if (name == "avg_speed_kmh") return s.avg_speed_kmh;
    if (name == "co2_kg") return s.co2_total_kg;
    if (name == "accidents_per_100k") return s.accidents_per_100k;
    if (name == "n_repeat") return s.strategy_counts[0];
    if (name == "n_imitate") return s.strategy_counts[1];
    if (name == "n_inquire") return s.strategy_counts[2];
    if (name == "n_deliberate") return s.strategy_counts[3];
    throw ConfigError("unknown indicator '" + name + "'");
}

std::vector<AggregateRow> aggregate(const RunResult& result, double level) {
    std::vector<AggregateRow> rows;
    if (result.series.empty()) return rows;
    const std::size_t periods = result.series.front().size();
    std::vector<double> values(result.series.size());
    for (std::size_t p = 0; p < periods; ++p) {
        for (const char* name : kIndicatorNames) {
            for (std::size_t r = 0; r < result.series.size(); ++r)
                values[r] = snapshot_indicator(result.series[r][p], name);
            stats::ConfidenceInterval ci = stats::t_confidence_interval(values, level);
            rows.push_back({result.series.front()[p].period, result.series.front()[p].year, name,
                            ci.mean, ci.lo, ci.hi});
        }
    }
    return rows;
}

CvCheckResult cv_stabilization(const ScenarioConfig& cfg, const std::string& indicator,
                               int max_reps, double tol) {
    if (max_reps < 10) throw ConfigError("cv-check: max_reps must be >= 10");
    snapshot_indicator(IndicatorSnapshot{}, indicator); // validate the name up front

    const ExecMode exec = cfg.simulation.parallel_kernels ? ExecMode::Parallel : ExecMode::Serial;
    std::vector<double> terminal;
    terminal.reserve(static_cast<std::size_t>(max_reps));

    CvCheckResult out{max_reps, false, {}};
    double prev_cv = 0.0;
    int consecutive = 0;
    for (int r = 1; r <= max_reps; ++r) {
        auto series = Simulation::run_replication(cfg, replication_seed(cfg.simulation.master_seed, r - 1), exec);
        terminal.push_back(snapshot_indicator(series.back(), indicator));
        if (r < 2) continue;
        double m = stats::mean(terminal);
        double sd = stats::sample_sd(terminal);
        double cv = m == 0.0 ? (sd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                             : sd / std::abs(m);
        out.cv_trace.push_back(cv);
        if (r > 2) {
            if (std::abs(cv - prev_cv) < tol)
                ++consecutive;
            else
                consecutive = 0;
        }
        prev_cv = cv;
        if (r >= 10 && consecutive >= 5) {
            out.recommended_reps = r;
            out.stabilized = true;
            return out;
        }
    }
    return out; // never stabilized; caller warns
}

void write_timeseries_csv(const RunResult& result, const std::string& scenario_name,
                          std::ostream& os) {
    os << "scenario,rep,period,year,share_car,share_moto,share_pub,avg_time_min,avg_speed_kmh,"
          "co2_kg,accidents_per_100k,n_repeat,n_imitate,n_inquire,n_deliberate\n";
    for (std::size_t r = 0; r < result.series.size(); ++r) {
        for (const IndicatorSnapshot& s : result.series[r]) {
            os << scenario_name << ',' << r << ',' << s.period << ',' << s.year << ','
               << fmt_g(s.shares[0]) << ',' << fmt_g(s.shares[1]) << ',' << fmt_g(s.shares[2]) << ','
               << fmt_g(s.avg_travel_time_min) << ',' << fmt_g(s.avg_speed_kmh) << ','
               << fmt_g(s.co2_total_kg) << ',' << fmt_g(s.accidents_per_100k) << ','
               << s.strategy_counts[0] << ',' << s.strategy_counts[1] << ',' << s.strategy_counts[2]
               << ',' << s.strategy_counts[3] << '\n';
        }
    }
}

void write_aggregate_csv(std::span<const AggregateRow> rows, std::ostream& os) {
    os << "period,year,indicator,mean,ci_low,ci_high\n";
    for (const AggregateRow& row : rows)
        os << row.period << ',' << row.year << ',' << row.indicator << ',' << fmt_g(row.mean) << ','
           << fmt_g(row.ci_low) << ',' << fmt_g(row.ci_high) << '\n';
}

std::string meta_json(const ScenarioConfig& cfg, const RunResult& result,
                      const std::string& scenario_name) {
    nlohmann::ordered_json j;
    j["tool"] = "modechoice";
    j["version"] = "1.0.0";
    j["scenario"] = scenario_name;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(cfg.config_hash()));
        j["config_hash"] = buf;
    }
    j["master_seed"] = std::to_string(result.master_seed);
    j["reps"] = result.series.size();
    j["years"] = result.years;
    j["n_agents"] = cfg.population.n_agents;
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (std::uint64_t s : result.rep_seeds) seeds.push_back(std::to_string(s));
    j["rep_seeds"] = seeds;
    j["config"] = cfg.canonical();
    return j.dump(2) + "\n";
}

void export_results(const ScenarioConfig& cfg, const RunResult& result, const std::string& dir,
                    const std::string& scenario_name) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir + "/timeseries.csv", std::ios::binary);
        if (!os) throw DataError("cannot write " + dir + "/timeseries.csv");
        write_timeseries_csv(result, scenario_name, os);
    }
    {
        std::vector<AggregateRow> rows = aggregate(result);
        std::ofstream os(dir + "/aggregate.csv", std::ios::binary);
        if (!os) throw DataError("cannot write " + dir + "/aggregate.csv");
        write_aggregate_csv(rows, os);
    }
    {
        std::ofstream os(dir + "/meta.json", std::ios::binary);
        if (!os) throw DataError("cannot write " + dir + "/meta.json");
        os << meta_json(cfg, result, scenario_name);
    }
}

} // namespace modechoice
