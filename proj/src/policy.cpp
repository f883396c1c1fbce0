#include "modechoice/policy.hpp"

#include <algorithm>
#include <sstream>

namespace modechoice {

ModesConfig apply_policies(const ModesConfig& base, std::span<const PolicyIntervention> active,
                           int year) {
    ModesConfig out = base;
    for (const PolicyIntervention& p : active) {
        if (p.start_year > year) continue;
        switch (p.kind) {
            case PolicyIntervention::Kind::FareFree:
                if (p.magnitude < 0.0 || p.magnitude > 1.0)
                    throw ConfigError("fare_free: magnitude must be a fare multiplier in [0,1]");
                out.pub.fare_or_opcost_per_km = base.pub.fare_or_opcost_per_km * p.magnitude;
                break;
            case PolicyIntervention::Kind::FrequencyBoost:
                if (p.magnitude <= 0.0 || p.magnitude > 1.0)
                    throw ConfigError("frequency_boost: magnitude must be a headway multiplier in (0,1]");
                out.pub.headway_min = base.pub.headway_min * p.magnitude;
                break;
            case PolicyIntervention::Kind::SecurityImprovement:
                if (p.magnitude < 0.0 || p.magnitude > 1.0)
                    throw ConfigError("security_improvement: magnitude must be a delta in [0,1]");
                out.pub.security_score = clamp01(base.pub.security_score + p.magnitude);
                break;
        }
    }
    return out;
}

namespace {

PolicyIntervention make_policy(PolicyIntervention::Kind kind,
                               std::span<const PolicyIntervention> defaults) {
    for (const PolicyIntervention& p : defaults)
        if (p.kind == kind) return p;
    PolicyIntervention p;
    p.kind = kind;
    p.magnitude = default_policy_magnitude(kind);
    p.start_year = 0;
    return p;
}

} // namespace

std::vector<PolicyScenario> combine_policies(const std::string& set_spec,
                                             std::span<const PolicyIntervention> defaults) {
    std::vector<PolicyScenario> out;
    std::istringstream is(set_spec);
    std::string item;
    while (std::getline(is, item, ',')) {
        // strip whitespace
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        PolicyScenario sc;
        if (item == "none" || item == "base") {
            sc.label = "base";
            out.push_back(std::move(sc));
            continue;
        }
        std::vector<PolicyIntervention::Kind> kinds;
        if (item == "all") {
            kinds = {PolicyIntervention::Kind::FareFree, PolicyIntervention::Kind::FrequencyBoost,
                     PolicyIntervention::Kind::SecurityImprovement};
        } else {
            std::istringstream parts(item);
            std::string part;
            while (std::getline(parts, part, '+')) kinds.push_back(parse_policy_kind(part));
        }
        std::sort(kinds.begin(), kinds.end());
        kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            sc.policies.push_back(make_policy(kinds[i], defaults));
            if (i) sc.label += "+";
            sc.label += policy_kind_name(kinds[i]);
        }
        out.push_back(std::move(sc));
    }
    if (out.empty()) throw ConfigError("--policies: empty policy set spec");
    return out;
}

} // namespace modechoice
