#include <doctest.h>

#include <cmath>
#include <sstream>

#include "modechoice/harness.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/stats.hpp"

using namespace modechoice;

namespace {

ScenarioConfig quick_scenario(int n_agents = 300, int years = 3, int reps = 4) {
    ScenarioConfig cfg = ScenarioConfig::defaults();
    cfg.population.n_agents = n_agents;
    cfg.simulation.years = years;
    cfg.simulation.reps = reps;
    return cfg;
}

// Every random ingredient pinned to a constant: replications are identical.
ScenarioConfig degenerate_scenario() {
    ScenarioConfig cfg = quick_scenario(200, 3, 5);
    for (int g = 0; g < kNumSes; ++g) {
        cfg.population.weight_sds[g].fill(0.0);
        cfg.population.income[g] = DistSpec::constant(2e6);
        for (int x = 0; x < 2; ++x)
            for (int b = 0; b < 3; ++b) cfg.population.init_mode_probs[g][x][b] = {1.0, 0.0, 0.0};
    }
    cfg.population.distance = DistSpec::constant(8.0);
    cfg.population.sat_threshold = DistSpec::constant(0.0); // always satisfied
    cfg.population.unc_threshold = DistSpec::constant(1.0); // always certain
    cfg.population.uncertainty_avoidance = DistSpec::constant(0.5);
    cfg.population.collectivism = DistSpec::constant(0.5);
    return cfg;
}

std::string timeseries_string(const RunResult& r, const std::string& name) {
    std::ostringstream os;
    write_timeseries_csv(r, name, os);
    return os.str();
}

std::string aggregate_string(const RunResult& r) {
    std::ostringstream os;
    auto rows = aggregate(r);
    write_aggregate_csv(rows, os);
    return os.str();
}

} // namespace

TEST_CASE("replication seeds are stable and distinct") {
    auto s0 = replication_seed(42, 0);
    CHECK(s0 == replication_seed(42, 0));
    CHECK(s0 != replication_seed(42, 1));
    CHECK(s0 != replication_seed(43, 0));
}

TEST_CASE("deterministic scenario yields zero-width confidence intervals") {
    RunResult r = run_batch(degenerate_scenario());
    for (const AggregateRow& row : aggregate(r)) {
        CHECK(row.ci_low == doctest::Approx(row.mean));
        CHECK(row.ci_high == doctest::Approx(row.mean));
    }
}

TEST_CASE("reruns are byte-identical and independent of job count") {
    ScenarioConfig cfg = quick_scenario();
    BatchOptions serial;
    serial.jobs = 1;
    BatchOptions parallel;
    parallel.jobs = 2;

    RunResult a = run_batch(cfg, serial);
    RunResult b = run_batch(cfg, serial);
    RunResult c = run_batch(cfg, parallel);

    CHECK(timeseries_string(a, "x") == timeseries_string(b, "x"));
    CHECK(timeseries_string(a, "x") == timeseries_string(c, "x"));
    CHECK(aggregate_string(a) == aggregate_string(c));
    CHECK(meta_json(cfg, a, "x") == meta_json(cfg, c, "x"));
}

TEST_CASE("timeseries golden header and row shape") {
    RunResult r = run_batch(quick_scenario(150, 2, 2));
    std::string csv = timeseries_string(r, "demo");
    std::string header = csv.substr(0, csv.find('\n'));
    CHECK(header ==
          "scenario,rep,period,year,share_car,share_moto,share_pub,avg_time_min,avg_speed_kmh,"
          "co2_kg,accidents_per_100k,n_repeat,n_imitate,n_inquire,n_deliberate");

    // every data row has exactly 15 cells and shares that sum to 1
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::vector<std::string> cells;
        std::istringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 15);
        double sum = std::stod(cells[4]) + std::stod(cells[5]) + std::stod(cells[6]);
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
    CHECK(rows == 2 * 3); // reps x (initial row + 2 years)
}

TEST_CASE("aggregate covers every period and indicator") {
    RunResult r = run_batch(quick_scenario(150, 2, 3));
    auto rows = aggregate(r);
    CHECK(rows.size() == 3 * kIndicatorNames.size()); // periods 0..2
    for (const auto& row : rows) {
        CHECK(row.ci_low <= row.mean + 1e-12);
        CHECK(row.ci_high >= row.mean - 1e-12);
    }
}

TEST_CASE("indicator lookup rejects unknown names") {
    IndicatorSnapshot s;
    CHECK_THROWS_AS(snapshot_indicator(s, "share_walk"), ConfigError);
    s.shares = {0.5, 0.3, 0.2};
    CHECK(snapshot_indicator(s, "share_pub") == doctest::Approx(0.2));
}

TEST_CASE("cv stabilization recommends the minimum for deterministic output") {
    CvCheckResult res = cv_stabilization(degenerate_scenario(), "share_car", 20, 0.005);
    CHECK(res.stabilized);
    CHECK(res.recommended_reps == 10);
    for (double cv : res.cv_trace) CHECK(cv == doctest::Approx(0.0));

    // an infinite tolerance is vacuous: also the minimum
    CvCheckResult loose = cv_stabilization(quick_scenario(100, 2, 2), "share_pub", 15,
                                           std::numeric_limits<double>::infinity());
    CHECK(loose.stabilized);
    CHECK(loose.recommended_reps == 10);

    CHECK_THROWS_AS(cv_stabilization(degenerate_scenario(), "share_car", 5, 0.005), ConfigError);
    CHECK_THROWS_AS(cv_stabilization(degenerate_scenario(), "nope", 20, 0.005), ConfigError);
}

TEST_CASE("config hash in meta.json tracks config identity") {
    ScenarioConfig cfg = quick_scenario();
    RunResult r = run_batch(cfg);
    std::string m1 = meta_json(cfg, r, "a");
    ScenarioConfig cfg2 = cfg;
    cfg2.modes.pub.headway_min += 1.0;
    std::string m2 = meta_json(cfg2, r, "a");
    CHECK(m1 != m2);
    CHECK(m1.find("config_hash") != std::string::npos);
}

TEST_CASE("t-interval coverage on synthetic normal draws") {
    // smaller sibling of the acceptance criterion: 300 trials, 30 draws each
    RngStream rng(2024);
    int covered = 0;
    const int trials = 300;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> xs;
        for (int i = 0; i < 30; ++i) xs.push_back(rng.normal(5.0, 2.0));
        auto ci = stats::t_confidence_interval(xs, 0.95);
        if (ci.lo <= 5.0 && 5.0 <= ci.hi) ++covered;
    }
    double rate = static_cast<double>(covered) / trials;
    CHECK(rate > 0.91);
    CHECK(rate < 0.99);
}

TEST_CASE("batch size overrides") {
    ScenarioConfig cfg = quick_scenario(100, 2, 6);
    BatchOptions opt;
    opt.reps_override = 3;
    opt.years_override = 4;
    RunResult r = run_batch(cfg, opt);
    CHECK(r.series.size() == 3);
    CHECK(r.series.front().size() == 5);
    CHECK(r.years == 4);
}
