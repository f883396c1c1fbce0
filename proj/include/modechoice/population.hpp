#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "modechoice/config.hpp"
#include "modechoice/types.hpp"

namespace modechoice {

class RngStream;

/// Age band index for the initial-mode table: 0 = 16-29, 1 = 30-59, 2 = 60+.
int age_band(int age);

/// Truncated-normal importance weights for one agent, clamped to [0,1].
/// sd = 0 returns the mean vector exactly.
WeightVec draw_weights(Ses ses, const PopulationConfig& cfg, RngStream& rng);

/// Categorical draw from P(mode | ses, sex, age band).
ModeId assign_initial_mode(Ses ses, Sex sex, int age, const PopulationConfig& cfg, RngStream& rng);

/// Synthesizes cfg.n_agents agents. Deterministic for a fixed seed: each
/// agent draws from its own derived stream, so the result does not depend on
/// construction order.
std::vector<Agent> synthesize_population(const PopulationConfig& cfg, std::uint64_t seed);

/// Audit dump, one row per agent.
void dump_population_csv(std::span<const Agent> agents, std::ostream& os);

} // namespace modechoice
