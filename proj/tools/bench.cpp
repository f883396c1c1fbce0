// Kernel benchmark: times the per-period decision pass with the serial
// reference implementation and with the OpenMP kernel, and checks that both
// produce identical output (the parity the test suite also enforces).
// Population synthesis and network construction are excluded from the timed
// region; they run once per replication and are inherently sequential.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "modechoice/config.hpp"
#include "modechoice/environment.hpp"
#include "modechoice/population.hpp"
#include "modechoice/social_network.hpp"

namespace mc = modechoice;
using clock_type = std::chrono::steady_clock;

namespace {

struct BenchRun {
    double ms;
    std::vector<mc::IndicatorSnapshot> series;
};

BenchRun run_periods(const mc::ScenarioConfig& cfg, const std::vector<mc::Agent>& agents,
                     const mc::SocialGraph& graph, mc::ExecMode exec) {
    mc::Simulation sim(cfg, 42, agents, graph);
    BenchRun out;
    auto t0 = clock_type::now();
    for (int y = 0; y < cfg.simulation.years; ++y) out.series.push_back(sim.step_period(exec));
    out.ms = std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
    return out;
}

bool same_series(const std::vector<mc::IndicatorSnapshot>& a,
                 const std::vector<mc::IndicatorSnapshot>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].shares != b[i].shares || a[i].strategy_counts != b[i].strategy_counts ||
            a[i].avg_travel_time_min != b[i].avg_travel_time_min ||
            a[i].co2_total_kg != b[i].co2_total_kg)
            return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int n_agents = argc > 1 ? std::atoi(argv[1]) : 50000;
    int years = argc > 2 ? std::atoi(argv[2]) : 20;

    mc::ScenarioConfig cfg = mc::ScenarioConfig::defaults();
    cfg.population.n_agents = n_agents;
    cfg.simulation.years = years;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel mode falls back to the serial path\n");
#endif
    std::printf("population %d, %d decision periods\n", n_agents, years);

    auto agents = mc::synthesize_population(cfg.population, 42);
    auto graph = mc::build_network(agents, cfg.network.m, cfg.network.homophily, cfg.network.bonus, 42);

    run_periods(cfg, agents, graph, mc::ExecMode::Serial); // warm-up
    BenchRun serial = run_periods(cfg, agents, graph, mc::ExecMode::Serial);
    BenchRun parallel = run_periods(cfg, agents, graph, mc::ExecMode::Parallel);

    double decisions = 1e-3 * n_agents * years; // thousands
    std::printf("serial reference : %8.1f ms  (%.2f Mdecisions/s)\n", serial.ms,
                decisions / serial.ms);
    std::printf("openmp kernel    : %8.1f ms  (%.2f Mdecisions/s)\n", parallel.ms,
                decisions / parallel.ms);
    std::printf("speedup          : %8.2fx\n", serial.ms / parallel.ms);

    if (!same_series(serial.series, parallel.series)) {
        std::printf("FAIL: serial and parallel kernels disagree\n");
        return 1;
    }
    std::printf("parity           : identical output\n");
    return 0;
}
