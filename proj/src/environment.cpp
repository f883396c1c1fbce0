#include "modechoice/environment.hpp"

#include <cmath>

#include "modechoice/consumat.hpp"
#include "modechoice/policy.hpp"
#include "modechoice/population.hpp"
#include "modechoice/rng.hpp"

namespace modechoice {

double congestion_factor(ModeId mode, double vc_ratio, const ModesConfig& cfg) {
    double f = cfg.bpr_alpha * std::pow(vc_ratio, cfg.bpr_beta);
    if (mode == ModeId::Motorcycle) f *= cfg.gamma_moto;
    return f;
}

double congested_travel_time_min(ModeId mode, double distance_km, double weighted_private_count,
                                 double capacity, const ModesConfig& cfg) {
    if (capacity <= 0.0) throw ConfigError("modes.capacity_per_agent: road capacity must be > 0");
    if (distance_km <= 0.0) throw DataError("congested_travel_time: distance must be > 0");
    if (weighted_private_count < 0.0) throw DataError("congested_travel_time: negative vehicle count");

    const ModeState& st = cfg.state(mode);
    double speed = st.base_speed_kmh / (1.0 + congestion_factor(mode, weighted_private_count / capacity, cfg));
    double t = distance_km / speed * 60.0;
    if (mode == ModeId::PublicTransit) t += st.headway_min / 2.0;
    return t;
}

AttrVec attribute_satisfaction(const Agent& agent, ModeId mode, const ModeState& st,
                               double travel_time_min, const ModesConfig& cfg) {
    AttrVec x{};

    if (mode == ModeId::PublicTransit) {
        x[static_cast<int>(AttributeId::AcquisitionCost)] = 1.0;
    } else {
        x[static_cast<int>(AttributeId::AcquisitionCost)] =
            clamp01(1.0 - st.acquisition_price / (cfg.accost_income_ratio * agent.annual_income()));
    }

    double monthly_cost =
        st.fare_or_opcost_per_km * agent.commute_distance_km * cfg.trips_per_year / 12.0;
    x[static_cast<int>(AttributeId::OperatingCost)] =
        clamp01(1.0 - monthly_cost / (cfg.opcost_income_share * agent.income_month));

    x[static_cast<int>(AttributeId::Comfort)] = st.comfort_score;
    x[static_cast<int>(AttributeId::RoadSafety)] = clamp01(1.0 - st.safety_risk / cfg.risk_max);
    x[static_cast<int>(AttributeId::PersonalSecurity)] = st.security_score;
    x[static_cast<int>(AttributeId::TravelTime)] =
        clamp01((cfg.time_max - travel_time_min) / (cfg.time_max - cfg.time_min));

    x[static_cast<int>(AttributeId::Emissions)] = clamp01(1.0 - st.emissions_gpkm / cfg.gpkm_max);
    return x;
}

void compute_indicators(std::span<const Agent> agents, std::span<const double> travel_time_min,
                        const ModesConfig& cfg, IndicatorSnapshot& out) {
    const double n = static_cast<double>(agents.size());
    double time_sum = 0.0;
    double dist_sum = 0.0;
    double co2_g = 0.0;
    double accidents = 0.0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const Agent& a = agents[i];
        const ModeState& st = cfg.state(a.current_mode);
        time_sum += travel_time_min[i];
        dist_sum += a.commute_distance_km;
        double annual_km = a.commute_distance_km * cfg.trips_per_year;
        double gpkm = st.emissions_gpkm;
        if (a.current_mode == ModeId::PublicTransit) gpkm /= cfg.bus_occupancy;
        co2_g += annual_km * gpkm;
        accidents += annual_km * st.safety_risk / 1e8;
    }
    out.avg_travel_time_min = time_sum / n;
    out.avg_speed_kmh = time_sum > 0.0 ? dist_sum / (time_sum / 60.0) : 0.0;
    out.co2_total_kg = co2_g / 1000.0;
    out.accidents_per_100k = accidents / n * 1e5;

    std::array<int, kNumModes> counts{};
    for (const Agent& a : agents) ++counts[static_cast<int>(a.current_mode)];
    for (int m = 0; m < kNumModes; ++m) out.shares[m] = static_cast<double>(counts[m]) / n;
}

namespace {

double weighted_private_count(std::span<const Agent> agents, const ModesConfig& cfg) {
    double v = 0.0;
    for (const Agent& a : agents) {
        if (a.current_mode == ModeId::Car) v += 1.0;
        else if (a.current_mode == ModeId::Motorcycle) v += cfg.pce_moto;
    }
    return v;
}

} // namespace

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t rep_seed)
    : cfg_(cfg),
      rep_seed_(rep_seed),
      agents_(synthesize_population(cfg.population, rep_seed)),
      graph_(build_network(agents_, cfg.network.m, cfg.network.homophily, cfg.network.bonus,
                           rep_seed)) {}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t rep_seed, std::vector<Agent> agents,
                       SocialGraph graph)
    : cfg_(cfg), rep_seed_(rep_seed), agents_(std::move(agents)), graph_(std::move(graph)) {
    if (static_cast<int>(agents_.size()) != graph_.n)
        throw DataError("simulation: population and network sizes differ");
}

namespace {

Simulation::PeriodState period_state(const ModesConfig& modes, double vehicle_count,
                                     double capacity) {
    if (capacity <= 0.0) throw ConfigError("modes.capacity_per_agent: road capacity must be > 0");
    Simulation::PeriodState ps;
    ps.modes = &modes;
    double vc = vehicle_count / capacity;
    for (int m = 0; m < kNumModes; ++m) {
        ModeId mode = static_cast<ModeId>(m);
        const ModeState& st = modes.state(mode);
        double speed = st.base_speed_kmh / (1.0 + congestion_factor(mode, vc, modes));
        ps.minutes_per_km[m] = 60.0 / speed;
        ps.wait_min[m] = mode == ModeId::PublicTransit ? st.headway_min / 2.0 : 0.0;
    }
    return ps;
}

} // namespace

IndicatorSnapshot Simulation::measure_initial() {
    ModesConfig modes = apply_policies(cfg_.modes, cfg_.policies, 0);
    const double capacity = modes.capacity_per_agent * static_cast<double>(agents_.size());
    const double v = weighted_private_count(agents_, modes);
    PeriodState ps = period_state(modes, v, capacity);

    std::vector<double> times(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        int m = static_cast<int>(agents_[i].current_mode);
        times[i] = agents_[i].commute_distance_km * ps.minutes_per_km[m] + ps.wait_min[m];
    }
    IndicatorSnapshot snap;
    snap.period = 0;
    snap.tick = 0;
    snap.year = cfg_.simulation.start_calendar_year;
    compute_indicators(agents_, times, modes, snap);
    snap.strategy_counts = {static_cast<int>(agents_.size()), 0, 0, 0};
    return snap;
}

Simulation::AgentDecision Simulation::evaluate_agent(int i, const PeriodState& period,
                                                     int decision_period) const {
    const Agent& a = agents_[static_cast<std::size_t>(i)];
    const ModesConfig& modes = *period.modes;

    DecisionContext ctx;
    ctx.current = a.current_mode;

    std::array<double, kNumModes> time_min{};
    for (int m = 0; m < kNumModes; ++m) {
        ModeId mode = static_cast<ModeId>(m);
        time_min[m] = a.commute_distance_km * period.minutes_per_km[m] + period.wait_min[m];
        AttrVec x = attribute_satisfaction(a, mode, modes.state(mode), time_min[m], modes);
        ctx.satisfaction[m] = compute_satisfaction(a.weights, x);
    }

    // Availability: public transit always; private modes when owned or when
    // the acquisition price fits the affordability rule.
    ctx.available[static_cast<int>(ModeId::PublicTransit)] = true;
    ctx.available[static_cast<int>(ModeId::Car)] =
        a.owns_car || modes.car.acquisition_price <= modes.k_car * a.annual_income();
    ctx.available[static_cast<int>(ModeId::Motorcycle)] =
        a.owns_moto || modes.moto.acquisition_price <= modes.k_moto * a.annual_income();

    auto nbrs = graph_.neighbors_of(i);
    for (int j : nbrs) ++ctx.neighbor_mode_count[static_cast<int>(agents_[static_cast<std::size_t>(j)].current_mode)];
    double peer_share =
        nbrs.empty() ? 0.0
                     : static_cast<double>(ctx.neighbor_mode_count[static_cast<int>(a.current_mode)]) /
                           static_cast<double>(nbrs.size());

    double s_cur = ctx.satisfaction[static_cast<int>(a.current_mode)];
    double u_cur = compute_uncertainty(a.uncertainty_avoidance, a.collectivism,
                                       a.experience[static_cast<int>(a.current_mode)], peer_share);
    StrategyKind strategy = select_strategy(s_cur, a.sat_threshold, u_cur, a.unc_threshold);

    RngStream rng = RngStream::derive(
        rep_seed_, {rng_tag::decision, static_cast<std::uint64_t>(decision_period),
                    static_cast<std::uint64_t>(i)});
    ModeId next = decide_mode(ctx, strategy, rng);
    return {next, strategy, time_min[static_cast<int>(a.current_mode)]};
}

IndicatorSnapshot Simulation::step_period(ExecMode exec) {
    const int n = static_cast<int>(agents_.size());
    const int decision_period = period_ + 1;
    ModesConfig modes = apply_policies(cfg_.modes, cfg_.policies, decision_period);
    const double capacity = modes.capacity_per_agent * static_cast<double>(n);
    const double v = weighted_private_count(agents_, modes);
    PeriodState ps = period_state(modes, v, capacity);

    std::vector<AgentDecision> decisions(static_cast<std::size_t>(n));

    // All agents evaluate against the period-start state; mode switches are
    // applied afterwards (synchronous update), so the loop is data-parallel.
    // Guided schedule: neighbor-scan cost follows the heavy-tailed degree
    // distribution, and the hubs sit at low ids.
    if (exec == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(guided, 256)
#endif
        for (int i = 0; i < n; ++i)
            decisions[static_cast<std::size_t>(i)] = evaluate_agent(i, ps, decision_period);
    } else {
        for (int i = 0; i < n; ++i)
            decisions[static_cast<std::size_t>(i)] = evaluate_agent(i, ps, decision_period);
    }

    // Id-ordered merge: indicator sums and state updates are independent of
    // the kernel's thread schedule.
    std::vector<double> times(static_cast<std::size_t>(n));
    IndicatorSnapshot snap;
    snap.strategy_counts = {0, 0, 0, 0};
    std::array<int, kNumModes> acquired{};
    for (int i = 0; i < n; ++i) {
        times[static_cast<std::size_t>(i)] = decisions[static_cast<std::size_t>(i)].travel_time_min;
        ++snap.strategy_counts[static_cast<int>(decisions[static_cast<std::size_t>(i)].strategy)];
    }
    compute_indicators(agents_, times, modes, snap); // pre-switch modes drove this period

    for (int i = 0; i < n; ++i) {
        Agent& a = agents_[static_cast<std::size_t>(i)];
        ModeId used = a.current_mode;
        ModeId next = decisions[static_cast<std::size_t>(i)].new_mode;
        update_experience(a.experience, used, cfg_.consumat.experience_lambda);
        if (next != used) {
            // First-time purchases only: what a vehicle registry would record.
            if (next == ModeId::Car && !a.owns_car) {
                ++acquired[static_cast<int>(ModeId::Car)];
                a.owns_car = true;
            }
            if (next == ModeId::Motorcycle && !a.owns_moto) {
                ++acquired[static_cast<int>(ModeId::Motorcycle)];
                a.owns_moto = true;
            }
        }
        a.current_mode = next;
    }
    acquisitions_.push_back(acquired);

    tick_ += cfg_.simulation.ticks_per_period;
    period_ = decision_period;

    // Shares reflect the end-of-period decision outcome.
    std::array<int, kNumModes> counts{};
    for (const Agent& a : agents_) ++counts[static_cast<int>(a.current_mode)];
    for (int m = 0; m < kNumModes; ++m)
        snap.shares[m] = static_cast<double>(counts[m]) / static_cast<double>(n);

    snap.period = period_;
    snap.tick = tick_;
    snap.year = cfg_.simulation.start_calendar_year + period_;
    return snap;
}

std::vector<IndicatorSnapshot> Simulation::run_replication(
    const ScenarioConfig& cfg, std::uint64_t rep_seed, ExecMode exec,
    std::vector<std::array<int, kNumModes>>* acquisitions_out) {
    std::vector<Agent> agents = synthesize_population(cfg.population, rep_seed);
    SocialGraph graph =
        build_network(agents, cfg.network.m, cfg.network.homophily, cfg.network.bonus, rep_seed);
    Simulation sim(cfg, rep_seed, std::move(agents), std::move(graph));

    std::vector<IndicatorSnapshot> series;
    series.reserve(static_cast<std::size_t>(cfg.simulation.years) + 1);
    series.push_back(sim.measure_initial());
    for (int y = 0; y < cfg.simulation.years; ++y) series.push_back(sim.step_period(exec));
    if (acquisitions_out) *acquisitions_out = sim.acquisitions();
    return series;
}

} // namespace modechoice
