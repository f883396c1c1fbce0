#pragma once

#include <span>
#include <string>
#include <vector>

#include "modechoice/config.hpp"
#include "modechoice/types.hpp"

namespace modechoice {

/// Applies every intervention whose start_year <= year to the public-transit
/// state. The three kinds touch disjoint fields (fare, headway, security
/// score), so application is order-independent; recomputing from the base
/// state each period makes it idempotent. Car and motorcycle states are
/// never modified.
ModesConfig apply_policies(const ModesConfig& base, std::span<const PolicyIntervention> active,
                           int year);

/// Named policy sets for sweeps: base case plus the requested subsets.
struct PolicyScenario {
    std::string label; // e.g. "base", "fare_free+security_improvement"
    std::vector<PolicyIntervention> policies;
};

/// Expands a sweep spec like "none,fare,freq,sec,fare+sec,all" into concrete
/// scenarios. Per-kind magnitude/start_year default from `defaults` when a
/// matching kind is present there, else from the built-in defaults.
std::vector<PolicyScenario> combine_policies(const std::string& set_spec,
                                             std::span<const PolicyIntervention> defaults);

} // namespace modechoice
