#include "modechoice/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "modechoice/fmt.hpp"
#include "modechoice/rng.hpp"

namespace modechoice {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a finite number, got '" + tok + "'");
    }
}

long long to_int(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + tok + "'");
    }
}

// Raw parsed file: section -> ordered (key, value) pairs, duplicates kept.
struct RawConfig {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
};

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            raw.sections[section]; // ensure presence even if empty
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        raw.sections[section].emplace_back(key, value);
    }
    return raw;
}

// Typed accessor over one section with consumption tracking so unknown keys
// can be rejected with their full path.
class Section {
public:
    Section(const RawConfig& raw, std::string name) : name_(std::move(name)) {
        auto it = raw.sections.find(name_);
        if (it != raw.sections.end()) {
            for (auto& kv : it->second) entries_.push_back({kv.first, kv.second, false});
        }
    }

    bool has(const std::string& key) const {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.key == key; });
    }

    std::string get_string(const std::string& key, const std::string& def) {
        const std::string* v = find_single(key);
        return v ? *v : def;
    }

    double get_double(const std::string& key, double def) {
        const std::string* v = find_single(key);
        return v ? to_double(*v, path(key)) : def;
    }

    long long get_int(const std::string& key, long long def) {
        const std::string* v = find_single(key);
        return v ? to_int(*v, path(key)) : def;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t def) {
        const std::string* v = find_single(key);
        if (!v) return def;
        try {
            return std::stoull(*v);
        } catch (const std::exception&) {
            throw ConfigError(path(key) + ": expected an unsigned integer, got '" + *v + "'");
        }
    }

    template <std::size_t N>
    std::array<double, N> get_doubles(const std::string& key, const std::array<double, N>& def) {
        const std::string* v = find_single(key);
        if (!v) return def;
        auto toks = split_ws(*v);
        if (toks.size() != N)
            throw ConfigError(path(key) + ": expected " + std::to_string(N) + " numbers, got " +
                              std::to_string(toks.size()));
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) out[i] = to_double(toks[i], path(key));
        return out;
    }

    DistSpec get_dist(const std::string& key, const DistSpec& def) {
        const std::string* v = find_single(key);
        return v ? DistSpec::parse(*v, path(key)) : def;
    }

    std::vector<std::string> get_all(const std::string& key) {
        std::vector<std::string> out;
        for (auto& e : entries_) {
            if (e.key == key) {
                e.consumed = true;
                out.push_back(e.value);
            }
        }
        return out;
    }

    void finish() const {
        for (auto& e : entries_) {
            if (!e.consumed) throw ConfigError("unknown key '" + path(e.key) + "'");
        }
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

private:
    struct Entry {
        std::string key;
        std::string value;
        bool consumed;
    };

    const std::string* find_single(const std::string& key) {
        const std::string* found = nullptr;
        for (auto& e : entries_) {
            if (e.key == key) {
                if (found) throw ConfigError(path(key) + ": duplicated key");
                e.consumed = true;
                found = &e.value;
            }
        }
        return found;
    }

    std::string name_;
    std::vector<Entry> entries_;
};

const char* kSesKeys[kNumSes] = {"low", "mid", "high"};
const char* kSexKeys[2] = {"f", "m"};
const char* kBandKeys[3] = {"age16_29", "age30_59", "age60_plus"};

void check_prob_row(const double* row, std::size_t n, const std::string& field) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(row[i]) || row[i] < 0.0)
            throw ConfigError(field + ": probabilities must be finite and non-negative");
        sum += row[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError(field + ": probabilities sum to " + fmt_g(sum) + ", expected 1");
}

void check_unit(double v, const std::string& field) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ConfigError(field + ": expected a value in [0,1], got " + fmt_g(v));
}

void check_nonneg(double v, const std::string& field) {
    if (!std::isfinite(v) || v < 0.0)
        throw ConfigError(field + ": expected a non-negative value, got " + fmt_g(v));
}

void check_pos(double v, const std::string& field) {
    if (!std::isfinite(v) || v <= 0.0)
        throw ConfigError(field + ": expected a positive value, got " + fmt_g(v));
}

} // namespace

DistSpec DistSpec::constant(double v) {
    DistSpec d;
    d.kind = Kind::Const;
    d.a = v;
    return d;
}

DistSpec DistSpec::parse(const std::string& text, const std::string& where) {
    auto toks = split_ws(text);
    if (toks.empty()) throw ConfigError(where + ": empty distribution spec");
    DistSpec d;
    const std::string& k = toks[0];
    auto need = [&](std::size_t n) {
        if (toks.size() != n + 1)
            throw ConfigError(where + ": '" + k + "' takes " + std::to_string(n) + " parameters");
    };
    if (k == "const") {
        need(1);
        d.kind = Kind::Const;
        d.a = to_double(toks[1], where);
    } else if (k == "uniform") {
        need(2);
        d.kind = Kind::Uniform;
        d.a = to_double(toks[1], where);
        d.b = to_double(toks[2], where);
        if (d.b < d.a) throw ConfigError(where + ": uniform hi < lo");
    } else if (k == "truncnorm") {
        need(4);
        d.kind = Kind::TruncNormal;
        d.a = to_double(toks[1], where);
        d.b = to_double(toks[2], where);
        d.lo = to_double(toks[3], where);
        d.hi = to_double(toks[4], where);
        if (d.b < 0.0) throw ConfigError(where + ": truncnorm sd < 0");
        if (d.hi < d.lo) throw ConfigError(where + ": truncnorm hi < lo");
    } else if (k == "lognormal") {
        need(2);
        d.kind = Kind::LogNormal;
        d.a = to_double(toks[1], where);
        d.b = to_double(toks[2], where);
        if (d.a <= 0.0) throw ConfigError(where + ": lognormal median must be > 0");
        if (d.b < 0.0) throw ConfigError(where + ": lognormal sigma < 0");
    } else {
        throw ConfigError(where + ": unknown distribution '" + k + "'");
    }
    return d;
}

std::string DistSpec::describe() const {
    switch (kind) {
        case Kind::Const: return "const " + fmt_exact(a);
        case Kind::Uniform: return "uniform " + fmt_exact(a) + " " + fmt_exact(b);
        case Kind::TruncNormal:
            return "truncnorm " + fmt_exact(a) + " " + fmt_exact(b) + " " + fmt_exact(lo) + " " + fmt_exact(hi);
        case Kind::LogNormal: return "lognormal " + fmt_exact(a) + " " + fmt_exact(b);
    }
    return "?";
}

double DistSpec::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::Const: return a;
        case Kind::Uniform: return rng.uniform(a, b);
        case Kind::TruncNormal: return rng.truncated_normal(a, b, lo, hi);
        case Kind::LogNormal: return rng.lognormal_median(a, b);
    }
    return a;
}

const char* policy_kind_name(PolicyIntervention::Kind k) {
    switch (k) {
        case PolicyIntervention::Kind::FareFree: return "fare_free";
        case PolicyIntervention::Kind::FrequencyBoost: return "frequency_boost";
        case PolicyIntervention::Kind::SecurityImprovement: return "security_improvement";
    }
    return "?";
}

PolicyIntervention::Kind parse_policy_kind(const std::string& name) {
    if (name == "fare_free" || name == "fare") return PolicyIntervention::Kind::FareFree;
    if (name == "frequency_boost" || name == "freq") return PolicyIntervention::Kind::FrequencyBoost;
    if (name == "security_improvement" || name == "sec") return PolicyIntervention::Kind::SecurityImprovement;
    throw ConfigError("unknown policy kind '" + name +
                      "' (expected fare_free, frequency_boost or security_improvement)");
}

double default_policy_magnitude(PolicyIntervention::Kind k) {
    switch (k) {
        case PolicyIntervention::Kind::FareFree: return 0.0;
        case PolicyIntervention::Kind::FrequencyBoost: return 0.5;
        case PolicyIntervention::Kind::SecurityImprovement: return 0.2;
    }
    return 0.0;
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig cfg;
    auto& pop = cfg.population;
    pop.income[0] = DistSpec::parse("lognormal 1.5e6 0.30", "population.income.low");
    pop.income[1] = DistSpec::parse("lognormal 2.8e6 0.30", "population.income.mid");
    pop.income[2] = DistSpec::parse("lognormal 7e6 0.40", "population.income.high");
    pop.distance = DistSpec::parse("truncnorm 7 3.5 1 25", "population.distance");
    pop.sat_threshold = DistSpec::parse("truncnorm 0.67 0.06 0.02 0.98", "population.sat_threshold");
    pop.unc_threshold = DistSpec::parse("truncnorm 0.25 0.08 0.02 0.98", "population.unc_threshold");
    pop.uncertainty_avoidance = DistSpec::parse("truncnorm 0.55 0.15 0 1", "population.uncertainty_avoidance");
    pop.collectivism = DistSpec::parse("truncnorm 0.55 0.15 0 1", "population.collectivism");

    // Initial mode table, rows (car, moto, pub) by (ses, sex, age band).
    // Reconstructed so that private-mode probability rises with income and is
    // higher for men and for the 30-59 band; aggregate shares land near
    // car 0.51 / moto 0.23 / pub 0.26 under the default demography.
    const double table[kNumSes][2][3][kNumModes] = {
        {
            // low
            {{0.14, 0.22, 0.64}, {0.27, 0.30, 0.43}, {0.23, 0.26, 0.51}}, // F
            {{0.18, 0.34, 0.48}, {0.35, 0.42, 0.23}, {0.29, 0.36, 0.35}}, // M
        },
        {
            // mid
            {{0.34, 0.22, 0.44}, {0.54, 0.24, 0.22}, {0.49, 0.20, 0.31}}, // F
            {{0.42, 0.30, 0.28}, {0.66, 0.26, 0.08}, {0.58, 0.25, 0.17}}, // M
        },
        {
            // high
            {{0.78, 0.05, 0.17}, {0.90, 0.03, 0.07}, {0.88, 0.02, 0.10}}, // F
            {{0.80, 0.09, 0.11}, {0.93, 0.04, 0.03}, {0.90, 0.04, 0.06}}, // M
        },
    };
    for (int s = 0; s < kNumSes; ++s)
        for (int x = 0; x < 2; ++x)
            for (int b = 0; b < 3; ++b)
                for (int m = 0; m < kNumModes; ++m) pop.init_mode_probs[s][x][b][m] = table[s][x][b][m];

    // Attribute-importance means per SES, ordered by AttributeId:
    // (acquisition cost, operating cost, comfort, road safety,
    //  personal security, travel time, emissions).
    pop.weight_means[0] = {0.90, 0.80, 0.50, 0.55, 0.45, 0.85, 0.30};
    pop.weight_means[1] = {0.60, 0.65, 0.80, 0.70, 0.78, 0.85, 0.35};
    pop.weight_means[2] = {0.62, 0.60, 0.90, 0.80, 0.88, 0.92, 0.38};
    for (int s = 0; s < kNumSes; ++s) pop.weight_sds[s].fill(0.08);

    auto& md = cfg.modes;
    md.car = ModeState{520.0, 16e6, 30.0, 0.0, 0.85, 0.80, 0.8, 192.0};
    md.moto = ModeState{160.0, 2.2e6, 35.0, 0.0, 0.50, 0.40, 12.0, 103.0};
    md.pub = ModeState{320.0, 0.0, 20.0, 45.0, 0.34, 0.30, 0.3, 80.0};
    return cfg;
}

ScenarioConfig ScenarioConfig::parse(const std::string& text, const std::string& name) {
    RawConfig raw = parse_raw(text);
    static const char* known_sections[] = {"simulation", "population", "network",
                                           "modes", "consumat", "policies"};
    for (auto& sec : raw.sections) {
        bool ok = std::any_of(std::begin(known_sections), std::end(known_sections),
                              [&](const char* s) { return sec.first == s; });
        if (!ok) throw ConfigError("unknown section '[" + sec.first + "]'");
    }

    ScenarioConfig cfg = defaults();
    cfg.name = name;

    {
        Section s(raw, "simulation");
        cfg.simulation.years = static_cast<int>(s.get_int("years", cfg.simulation.years));
        cfg.simulation.reps = static_cast<int>(s.get_int("reps", cfg.simulation.reps));
        cfg.simulation.master_seed = s.get_u64("master_seed", cfg.simulation.master_seed);
        cfg.simulation.ticks_per_period =
            static_cast<int>(s.get_int("ticks_per_period", cfg.simulation.ticks_per_period));
        cfg.simulation.start_calendar_year =
            static_cast<int>(s.get_int("start_calendar_year", cfg.simulation.start_calendar_year));
        std::string kernels = s.get_string("kernels", cfg.simulation.parallel_kernels ? "parallel" : "serial");
        if (kernels == "parallel")
            cfg.simulation.parallel_kernels = true;
        else if (kernels == "serial")
            cfg.simulation.parallel_kernels = false;
        else
            throw ConfigError("simulation.kernels: expected 'parallel' or 'serial', got '" + kernels + "'");
        s.finish();
    }

    {
        Section s(raw, "population");
        auto& pop = cfg.population;
        pop.n_agents = static_cast<int>(s.get_int("n_agents", pop.n_agents));
        pop.city_population = s.get_double("city_population", pop.city_population);
        pop.ses_shares = s.get_doubles<3>("ses_shares", pop.ses_shares);
        pop.sex_shares = s.get_doubles<2>("sex_shares", pop.sex_shares);
        pop.age_band_shares = s.get_doubles<3>("age_band_shares", pop.age_band_shares);
        auto age_range = s.get_doubles<2>("age_range", {static_cast<double>(pop.age_min),
                                                        static_cast<double>(pop.age_max)});
        pop.age_min = static_cast<int>(age_range[0]);
        pop.age_max = static_cast<int>(age_range[1]);
        for (int g = 0; g < kNumSes; ++g)
            pop.income[g] = s.get_dist(std::string("income.") + kSesKeys[g], pop.income[g]);
        pop.distance = s.get_dist("distance", pop.distance);
        for (int g = 0; g < kNumSes; ++g)
            for (int x = 0; x < 2; ++x)
                for (int b = 0; b < 3; ++b) {
                    std::string key = std::string("init_mode.") + kSesKeys[g] + "." + kSexKeys[x] + "." + kBandKeys[b];
                    pop.init_mode_probs[g][x][b] = s.get_doubles<3>(key, pop.init_mode_probs[g][x][b]);
                }
        for (int g = 0; g < kNumSes; ++g) {
            pop.weight_means[g] = s.get_doubles<7>(std::string("weight_means.") + kSesKeys[g], pop.weight_means[g]);
            pop.weight_sds[g] = s.get_doubles<7>(std::string("weight_sds.") + kSesKeys[g], pop.weight_sds[g]);
        }
        pop.sat_threshold = s.get_dist("sat_threshold", pop.sat_threshold);
        pop.unc_threshold = s.get_dist("unc_threshold", pop.unc_threshold);
        pop.uncertainty_avoidance = s.get_dist("uncertainty_avoidance", pop.uncertainty_avoidance);
        pop.collectivism = s.get_dist("collectivism", pop.collectivism);
        s.finish();
    }

    {
        Section s(raw, "network");
        cfg.network.m = static_cast<int>(s.get_int("m", cfg.network.m));
        cfg.network.homophily = s.get_double("homophily", cfg.network.homophily);
        cfg.network.bonus = s.get_double("homophily_bonus", cfg.network.bonus);
        s.finish();
    }

    {
        Section s(raw, "modes");
        auto& md = cfg.modes;
        const char* mode_keys[kNumModes] = {"car", "moto", "pub"};
        for (int m = 0; m < kNumModes; ++m) {
            ModeState& st = md.state(static_cast<ModeId>(m));
            std::string p = std::string(mode_keys[m]) + ".";
            st.fare_or_opcost_per_km = s.get_double(p + "opcost_per_km", st.fare_or_opcost_per_km);
            st.acquisition_price = s.get_double(p + "price", st.acquisition_price);
            st.base_speed_kmh = s.get_double(p + "speed_kmh", st.base_speed_kmh);
            st.headway_min = s.get_double(p + "headway_min", st.headway_min);
            st.comfort_score = s.get_double(p + "comfort", st.comfort_score);
            st.security_score = s.get_double(p + "security", st.security_score);
            st.safety_risk = s.get_double(p + "risk_per_100mkm", st.safety_risk);
            st.emissions_gpkm = s.get_double(p + "gpkm", st.emissions_gpkm);
        }
        md.bpr_alpha = s.get_double("bpr_alpha", md.bpr_alpha);
        md.bpr_beta = s.get_double("bpr_beta", md.bpr_beta);
        md.gamma_moto = s.get_double("gamma_moto", md.gamma_moto);
        md.pce_moto = s.get_double("pce_moto", md.pce_moto);
        md.capacity_per_agent = s.get_double("capacity_per_agent", md.capacity_per_agent);
        md.time_min = s.get_double("time_min", md.time_min);
        md.time_max = s.get_double("time_max", md.time_max);
        md.opcost_income_share = s.get_double("opcost_income_share", md.opcost_income_share);
        md.accost_income_ratio = s.get_double("accost_income_ratio", md.accost_income_ratio);
        md.risk_max = s.get_double("risk_max", md.risk_max);
        md.gpkm_max = s.get_double("gpkm_max", md.gpkm_max);
        md.bus_occupancy = s.get_double("bus_occupancy", md.bus_occupancy);
        md.trips_per_year = s.get_double("trips_per_year", md.trips_per_year);
        md.k_car = s.get_double("k_car", md.k_car);
        md.k_moto = s.get_double("k_moto", md.k_moto);
        s.finish();
    }

    {
        Section s(raw, "consumat");
        cfg.consumat.experience_lambda = s.get_double("experience_lambda", cfg.consumat.experience_lambda);
        s.finish();
    }

    {
        Section s(raw, "policies");
        cfg.policies.clear();
        for (const std::string& line : s.get_all("policy")) {
            auto toks = split_ws(line);
            if (toks.empty()) throw ConfigError("policies.policy: empty policy line");
            PolicyIntervention p;
            p.kind = parse_policy_kind(toks[0]);
            p.magnitude = default_policy_magnitude(p.kind);
            if (toks.size() > 1) p.magnitude = to_double(toks[1], "policies.policy");
            if (toks.size() > 2) p.start_year = static_cast<int>(to_int(toks[2], "policies.policy"));
            if (toks.size() > 3) throw ConfigError("policies.policy: too many tokens in '" + line + "'");
            cfg.policies.push_back(p);
        }
        s.finish();
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    std::size_t slash = stem.find_last_of("/\\");
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    std::size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    return parse(ss.str(), stem);
}

void ScenarioConfig::validate() const {
    if (simulation.years < 1) throw ConfigError("simulation.years: must be >= 1");
    if (simulation.reps < 1) throw ConfigError("simulation.reps: must be >= 1");
    if (simulation.ticks_per_period < 1) throw ConfigError("simulation.ticks_per_period: must be >= 1");

    const auto& pop = population;
    if (pop.n_agents < 1) throw ConfigError("population.n_agents: must be >= 1");
    check_pos(pop.city_population, "population.city_population");
    check_prob_row(pop.ses_shares.data(), 3, "population.ses_shares");
    check_prob_row(pop.sex_shares.data(), 2, "population.sex_shares");
    check_prob_row(pop.age_band_shares.data(), 3, "population.age_band_shares");
    if (pop.age_min < 16) throw ConfigError("population.age_range: minimum age must be >= 16");
    if (pop.age_max <= pop.age_min) throw ConfigError("population.age_range: max must exceed min");
    for (int g = 0; g < kNumSes; ++g)
        for (int x = 0; x < 2; ++x)
            for (int b = 0; b < 3; ++b)
                check_prob_row(pop.init_mode_probs[g][x][b].data(), kNumModes,
                               std::string("population.init_mode.") + kSesKeys[g] + "." + kSexKeys[x] + "." +
                                   kBandKeys[b]);
    for (int g = 0; g < kNumSes; ++g)
        for (int a = 0; a < kNumAttributes; ++a) {
            check_unit(pop.weight_means[g][a], std::string("population.weight_means.") + kSesKeys[g]);
            check_nonneg(pop.weight_sds[g][a], std::string("population.weight_sds.") + kSesKeys[g]);
        }
    {
        // An all-zero mean weight vector would create degenerate agents whose
        // satisfaction is undefined; reject at configuration time.
        for (int g = 0; g < kNumSes; ++g) {
            double sum = 0.0;
            for (double w : pop.weight_means[g]) sum += w;
            if (sum <= 0.0)
                throw ConfigError(std::string("population.weight_means.") + kSesKeys[g] +
                                  ": weight means must not be all zero");
        }
    }

    if (network.m < 1) throw ConfigError("network.m: must be >= 1");
    if (network.m >= pop.n_agents && pop.n_agents > 1)
        throw ConfigError("network.m: must be < population.n_agents");
    check_unit(network.homophily, "network.homophily");
    check_nonneg(network.bonus, "network.homophily_bonus");

    const char* mode_keys[kNumModes] = {"car", "moto", "pub"};
    for (int m = 0; m < kNumModes; ++m) {
        const ModeState& st = modes.state(static_cast<ModeId>(m));
        std::string p = std::string("modes.") + mode_keys[m] + ".";
        check_nonneg(st.fare_or_opcost_per_km, p + "opcost_per_km");
        check_nonneg(st.acquisition_price, p + "price");
        check_pos(st.base_speed_kmh, p + "speed_kmh");
        check_nonneg(st.headway_min, p + "headway_min");
        check_unit(st.comfort_score, p + "comfort");
        check_unit(st.security_score, p + "security");
        check_nonneg(st.safety_risk, p + "risk_per_100mkm");
        check_nonneg(st.emissions_gpkm, p + "gpkm");
    }
    check_nonneg(modes.bpr_alpha, "modes.bpr_alpha");
    check_pos(modes.bpr_beta, "modes.bpr_beta");
    check_pos(modes.capacity_per_agent, "modes.capacity_per_agent");
    if (modes.gamma_moto < 0.0 || modes.gamma_moto > 1.0)
        throw ConfigError("modes.gamma_moto: expected a value in [0,1]");
    check_nonneg(modes.pce_moto, "modes.pce_moto");
    if (modes.time_max <= modes.time_min)
        throw ConfigError("modes.time_max: must exceed modes.time_min");
    check_pos(modes.opcost_income_share, "modes.opcost_income_share");
    check_pos(modes.accost_income_ratio, "modes.accost_income_ratio");
    check_pos(modes.risk_max, "modes.risk_max");
    check_pos(modes.gpkm_max, "modes.gpkm_max");
    check_pos(modes.bus_occupancy, "modes.bus_occupancy");
    check_pos(modes.trips_per_year, "modes.trips_per_year");
    check_pos(modes.k_car, "modes.k_car");
    check_pos(modes.k_moto, "modes.k_moto");

    if (consumat.experience_lambda < 0.0 || consumat.experience_lambda > 1.0)
        throw ConfigError("consumat.experience_lambda: expected a value in [0,1]");

    for (const auto& p : policies) {
        switch (p.kind) {
            case PolicyIntervention::Kind::FareFree:
                if (p.magnitude < 0.0 || p.magnitude > 1.0)
                    throw ConfigError("policies: fare_free magnitude must be a fare multiplier in [0,1]");
                break;
            case PolicyIntervention::Kind::FrequencyBoost:
                if (p.magnitude <= 0.0 || p.magnitude > 1.0)
                    throw ConfigError("policies: frequency_boost magnitude must be a headway multiplier in (0,1]");
                break;
            case PolicyIntervention::Kind::SecurityImprovement:
                if (p.magnitude < 0.0 || p.magnitude > 1.0)
                    throw ConfigError("policies: security_improvement magnitude must be a delta in [0,1]");
                break;
        }
        if (p.start_year < 0) throw ConfigError("policies: start_year must be >= 0");
    }
}

std::string ScenarioConfig::canonical() const {
    std::ostringstream os;
    auto kv = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
    auto kvd = [&](const std::string& k, double v) { kv(k, fmt_exact(v)); };

    kv("simulation.years", std::to_string(simulation.years));
    kv("simulation.reps", std::to_string(simulation.reps));
    kv("simulation.master_seed", std::to_string(simulation.master_seed));
    kv("simulation.ticks_per_period", std::to_string(simulation.ticks_per_period));
    kv("simulation.start_calendar_year", std::to_string(simulation.start_calendar_year));
    kv("simulation.kernels", simulation.parallel_kernels ? "parallel" : "serial");

    kv("population.n_agents", std::to_string(population.n_agents));
    kvd("population.city_population", population.city_population);
    for (int i = 0; i < 3; ++i) kvd("population.ses_shares." + std::to_string(i), population.ses_shares[i]);
    for (int i = 0; i < 2; ++i) kvd("population.sex_shares." + std::to_string(i), population.sex_shares[i]);
    for (int i = 0; i < 3; ++i)
        kvd("population.age_band_shares." + std::to_string(i), population.age_band_shares[i]);
    kv("population.age_min", std::to_string(population.age_min));
    kv("population.age_max", std::to_string(population.age_max));
    for (int g = 0; g < kNumSes; ++g)
        kv(std::string("population.income.") + kSesKeys[g], population.income[g].describe());
    kv("population.distance", population.distance.describe());
    for (int g = 0; g < kNumSes; ++g)
        for (int x = 0; x < 2; ++x)
            for (int b = 0; b < 3; ++b)
                for (int m = 0; m < kNumModes; ++m)
                    kvd(std::string("population.init_mode.") + kSesKeys[g] + "." + kSexKeys[x] + "." + kBandKeys[b] +
                            "." + std::to_string(m),
                        population.init_mode_probs[g][x][b][m]);
    for (int g = 0; g < kNumSes; ++g)
        for (int a = 0; a < kNumAttributes; ++a) {
            kvd(std::string("population.weight_means.") + kSesKeys[g] + "." + std::to_string(a),
                population.weight_means[g][a]);
            kvd(std::string("population.weight_sds.") + kSesKeys[g] + "." + std::to_string(a),
                population.weight_sds[g][a]);
        }
    kv("population.sat_threshold", population.sat_threshold.describe());
    kv("population.unc_threshold", population.unc_threshold.describe());
    kv("population.uncertainty_avoidance", population.uncertainty_avoidance.describe());
    kv("population.collectivism", population.collectivism.describe());

    kv("network.m", std::to_string(network.m));
    kvd("network.homophily", network.homophily);
    kvd("network.homophily_bonus", network.bonus);

    const char* mode_keys[kNumModes] = {"car", "moto", "pub"};
    for (int m = 0; m < kNumModes; ++m) {
        const ModeState& st = modes.state(static_cast<ModeId>(m));
        std::string p = std::string("modes.") + mode_keys[m] + ".";
        kvd(p + "opcost_per_km", st.fare_or_opcost_per_km);
        kvd(p + "price", st.acquisition_price);
        kvd(p + "speed_kmh", st.base_speed_kmh);
        kvd(p + "headway_min", st.headway_min);
        kvd(p + "comfort", st.comfort_score);
        kvd(p + "security", st.security_score);
        kvd(p + "risk_per_100mkm", st.safety_risk);
        kvd(p + "gpkm", st.emissions_gpkm);
    }
    kvd("modes.bpr_alpha", modes.bpr_alpha);
    kvd("modes.bpr_beta", modes.bpr_beta);
    kvd("modes.gamma_moto", modes.gamma_moto);
    kvd("modes.pce_moto", modes.pce_moto);
    kvd("modes.capacity_per_agent", modes.capacity_per_agent);
    kvd("modes.time_min", modes.time_min);
    kvd("modes.time_max", modes.time_max);
    kvd("modes.opcost_income_share", modes.opcost_income_share);
    kvd("modes.accost_income_ratio", modes.accost_income_ratio);
    kvd("modes.risk_max", modes.risk_max);
    kvd("modes.gpkm_max", modes.gpkm_max);
    kvd("modes.bus_occupancy", modes.bus_occupancy);
    kvd("modes.trips_per_year", modes.trips_per_year);
    kvd("modes.k_car", modes.k_car);
    kvd("modes.k_moto", modes.k_moto);

    kvd("consumat.experience_lambda", consumat.experience_lambda);

    for (std::size_t i = 0; i < policies.size(); ++i) {
        const auto& p = policies[i];
        kv("policies." + std::to_string(i),
           std::string(policy_kind_name(p.kind)) + " " + fmt_exact(p.magnitude) + " " + std::to_string(p.start_year));
    }
    return os.str();
}

std::uint64_t ScenarioConfig::config_hash() const {
    // FNV-1a 64 over the canonical dump.
    std::string c = canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace modechoice
