#include "modechoice/consumat.hpp"

#include "modechoice/rng.hpp"

namespace modechoice {

double compute_satisfaction(const WeightVec& weights, const AttrVec& x) {
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < kNumAttributes; ++k) {
        num += weights[k] * x[k];
        den += weights[k];
    }
    if (den <= 0.0) throw DataError("compute_satisfaction: degenerate all-zero weight vector");
    return num / den;
}

double compute_uncertainty(double ua, double coll, double experience, double peer_share) {
    double social = 1.0 - peer_share;
    double personal = 1.0 - experience;
    return ua * (coll * social + (1.0 - coll) * personal);
}

StrategyKind select_strategy(double s, double s_star, double u, double u_star) {
    const bool satisfied = s >= s_star;
    const bool certain = u <= u_star;
    if (satisfied) return certain ? StrategyKind::Repeat : StrategyKind::Imitate;
    return certain ? StrategyKind::Deliberate : StrategyKind::Inquire;
}

namespace {

ModeId imitate(const DecisionContext& ctx, RngStream& rng) {
    int best_count = 0;
    for (int m = 0; m < kNumModes; ++m)
        if (ctx.available[m] && ctx.neighbor_mode_count[m] > best_count)
            best_count = ctx.neighbor_mode_count[m];
    if (best_count == 0) return ctx.current; // no observable, adoptable behavior

    std::array<int, kNumModes> tied{};
    int n_tied = 0;
    for (int m = 0; m < kNumModes; ++m)
        if (ctx.available[m] && ctx.neighbor_mode_count[m] == best_count) tied[n_tied++] = m;
    if (n_tied == 1) return static_cast<ModeId>(tied[0]);
    for (int i = 0; i < n_tied; ++i)
        if (tied[i] == static_cast<int>(ctx.current)) return ctx.current;
    return static_cast<ModeId>(tied[rng.uniform_index(static_cast<std::uint64_t>(n_tied))]);
}

ModeId inquire(const DecisionContext& ctx) {
    int best = -1;
    for (int m = 0; m < kNumModes; ++m) {
        if (!ctx.available[m] || ctx.neighbor_mode_count[m] < 1) continue;
        if (best < 0 || ctx.satisfaction[m] > ctx.satisfaction[best]) best = m;
    }
    if (best < 0) return ctx.current;
    // Social comparison only moves the agent on strict improvement.
    if (ctx.satisfaction[best] > ctx.satisfaction[static_cast<int>(ctx.current)])
        return static_cast<ModeId>(best);
    return ctx.current;
}

ModeId deliberate(const DecisionContext& ctx) {
    double best = -1.0;
    for (int m = 0; m < kNumModes; ++m)
        if (ctx.available[m] && ctx.satisfaction[m] > best) best = ctx.satisfaction[m];
    // Ties keep the current mode (the current mode is always available).
    if (ctx.satisfaction[static_cast<int>(ctx.current)] >= best) return ctx.current;
    for (int m = 0; m < kNumModes; ++m)
        if (ctx.available[m] && ctx.satisfaction[m] == best) return static_cast<ModeId>(m);
    return ctx.current;
}

} // namespace

ModeId decide_mode(const DecisionContext& ctx, StrategyKind strategy, RngStream& rng) {
    switch (strategy) {
        case StrategyKind::Repeat: return ctx.current;
        case StrategyKind::Imitate: return imitate(ctx, rng);
        case StrategyKind::Inquire: return inquire(ctx);
        case StrategyKind::Deliberate: return deliberate(ctx);
    }
    return ctx.current;
}

void update_experience(std::array<double, kNumModes>& experience, ModeId used, double lambda) {
    for (int m = 0; m < kNumModes; ++m) {
        double target = m == static_cast<int>(used) ? 1.0 : 0.0;
        experience[m] = lambda * experience[m] + (1.0 - lambda) * target;
    }
}

} // namespace modechoice
