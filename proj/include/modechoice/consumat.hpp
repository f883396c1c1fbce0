#pragma once

#include <array>
#include <span>

#include "modechoice/types.hpp"

namespace modechoice {

class RngStream;

/// Weighted-sum trip satisfaction rescaled by the weight sum so the result
/// stays in [0,1]: S = sum(w_k x_k) / sum(w_k). Requires sum(w) > 0, which
/// population synthesis guarantees.
double compute_satisfaction(const WeightVec& weights, const AttrVec& x);

/// U = ua * [ coll*(1 - peer_share) + (1 - coll)*(1 - experience) ].
/// Non-increasing in peer_share and experience, proportional in ua.
double compute_uncertainty(double uncertainty_avoidance, double collectivism, double experience,
                           double peer_share);

/// Quadrant dispatch. Thresholds are satisfied at equality (>= S*, <= U*),
/// which biases boundaries toward Repeat.
StrategyKind select_strategy(double satisfaction, double sat_threshold, double uncertainty,
                             double unc_threshold);

/// Inputs a decision strategy needs about one agent's situation.
struct DecisionContext {
    ModeId current = ModeId::PublicTransit;
    std::array<double, kNumModes> satisfaction{};     // S per candidate mode
    std::array<bool, kNumModes> available{};          // PublicTransit always true
    std::array<int, kNumModes> neighbor_mode_count{}; // current modes among neighbors
};

/// Applies one strategy:
///  - Repeat: keep the current mode.
///  - Imitate: plurality mode among neighbors restricted to available modes;
///    on a tie keep the current mode if tied, else uniform among the tied.
///  - Inquire: among available modes used by at least one neighbor, take the
///    satisfaction argmax; switch only on strict improvement.
///  - Deliberate: satisfaction argmax over all available modes; ties keep
///    the current mode.
ModeId decide_mode(const DecisionContext& ctx, StrategyKind strategy, RngStream& rng);

/// e' = lambda * e + (1 - lambda) * 1{mode == used}.
void update_experience(std::array<double, kNumModes>& experience, ModeId used, double lambda);

} // namespace modechoice
