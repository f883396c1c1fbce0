#include "modechoice/population.hpp"

#include <cmath>
#include <ostream>

#include "modechoice/fmt.hpp"
#include "modechoice/rng.hpp"

namespace modechoice {

int age_band(int age) {
    if (age < 30) return 0;
    if (age < 60) return 1;
    return 2;
}

WeightVec draw_weights(Ses ses, const PopulationConfig& cfg, RngStream& rng) {
    const WeightVec& means = cfg.weight_means[static_cast<int>(ses)];
    const WeightVec& sds = cfg.weight_sds[static_cast<int>(ses)];
    WeightVec w{};
    for (int a = 0; a < kNumAttributes; ++a) {
        if (means[a] < 0.0 || means[a] > 1.0)
            throw ConfigError("population.weight_means: mean outside [0,1]");
        w[a] = sds[a] == 0.0 ? means[a] : rng.clamped_normal(means[a], sds[a], 0.0, 1.0);
    }
    return w;
}

ModeId assign_initial_mode(Ses ses, Sex sex, int age, const PopulationConfig& cfg, RngStream& rng) {
    const auto& row = cfg.init_mode_probs[static_cast<int>(ses)][static_cast<int>(sex)][age_band(age)];
    double sum = row[0] + row[1] + row[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("population.init_mode: probability row does not sum to 1");
    return static_cast<ModeId>(rng.categorical(std::span<const double>(row.data(), row.size())));
}

namespace {

void check_shares(std::span<const double> shares, const char* field) {
    double sum = 0.0;
    for (double s : shares) {
        if (!std::isfinite(s) || s < 0.0)
            throw ConfigError(std::string(field) + ": shares must be finite and non-negative");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError(std::string(field) + ": shares must sum to 1");
}

} // namespace

std::vector<Agent> synthesize_population(const PopulationConfig& cfg, std::uint64_t seed) {
    if (cfg.n_agents < 1) throw ConfigError("population.n_agents: must be >= 1");
    check_shares(std::span<const double>(cfg.ses_shares.data(), 3), "population.ses_shares");
    check_shares(std::span<const double>(cfg.sex_shares.data(), 2), "population.sex_shares");
    check_shares(std::span<const double>(cfg.age_band_shares.data(), 3), "population.age_band_shares");

    std::vector<Agent> agents(static_cast<std::size_t>(cfg.n_agents));
    const std::array<double, 3>& bands = cfg.age_band_shares;

    for (int i = 0; i < cfg.n_agents; ++i) {
        // One independent stream per agent with a fixed draw order.
        RngStream rng = RngStream::derive(seed, {rng_tag::population, static_cast<std::uint64_t>(i)});
        Agent& a = agents[static_cast<std::size_t>(i)];
        a.id = i;

        a.ses = static_cast<Ses>(rng.categorical(std::span<const double>(cfg.ses_shares.data(), 3)));
        a.sex = static_cast<Sex>(rng.categorical(std::span<const double>(cfg.sex_shares.data(), 2)));

        int band = rng.categorical(std::span<const double>(bands.data(), 3));
        int lo = band == 0 ? cfg.age_min : band == 1 ? 30 : 60;
        int hi = band == 0 ? 29 : band == 1 ? 59 : cfg.age_max;
        hi = std::max(hi, lo);
        a.age = rng.uniform_int(lo, hi);

        a.income_month = cfg.income[static_cast<int>(a.ses)].sample(rng);
        if (a.income_month <= 0.0) a.income_month = 1.0;
        a.commute_distance_km = cfg.distance.sample(rng);
        if (a.commute_distance_km <= 0.0) a.commute_distance_km = 0.1;

        a.weights = draw_weights(a.ses, cfg, rng);
        {
            double wsum = 0.0;
            for (double w : a.weights) wsum += w;
            // Degenerate agents must be impossible before the simulation
            // starts; satisfaction is undefined for an all-zero vector.
            if (wsum <= 0.0)
                throw ConfigError("population.weight_means: drew an all-zero weight vector; "
                                  "raise the means or lower the sds");
        }
        a.sat_threshold = cfg.sat_threshold.sample(rng);
        a.unc_threshold = cfg.unc_threshold.sample(rng);
        a.uncertainty_avoidance = clamp01(cfg.uncertainty_avoidance.sample(rng));
        a.collectivism = clamp01(cfg.collectivism.sample(rng));

        a.current_mode = assign_initial_mode(a.ses, a.sex, a.age, cfg, rng);
        // Agents start with full familiarity with the mode they have been
        // using and none with the alternatives.
        a.experience.fill(0.0);
        a.experience[static_cast<int>(a.current_mode)] = 1.0;
        a.owns_car = a.current_mode == ModeId::Car;
        a.owns_moto = a.current_mode == ModeId::Motorcycle;
    }
    return agents;
}

void dump_population_csv(std::span<const Agent> agents, std::ostream& os) {
    os << "id,sex,age,ses,income,distance,mode,"
          "w_accost,w_opcost,w_comfort,w_safety,w_security,w_time,w_emis,"
          "sat_thr,unc_thr,ua,coll\n";
    for (const Agent& a : agents) {
        os << a.id << ',' << sex_name(a.sex) << ',' << a.age << ',' << ses_name(a.ses) << ','
           << fmt_g(a.income_month) << ',' << fmt_g(a.commute_distance_km) << ',' << mode_name(a.current_mode);
        for (int k = 0; k < kNumAttributes; ++k) os << ',' << fmt_g(a.weights[k]);
        os << ',' << fmt_g(a.sat_threshold) << ',' << fmt_g(a.unc_threshold) << ','
           << fmt_g(a.uncertainty_avoidance) << ',' << fmt_g(a.collectivism) << '\n';
    }
}

} // namespace modechoice
