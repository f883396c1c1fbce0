#include "modechoice/bass.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "modechoice/types.hpp"

namespace modechoice::bass {

double cumulative(const BassParams& params, double t) {
    if (t <= 0.0) return 0.0;
    double ex = std::exp(-(params.p + params.q) * t);
    return params.m * (1.0 - ex) / (1.0 + (params.q / params.p) * ex);
}

double peak_time(const BassParams& params) {
    return std::log(params.q / params.p) / (params.p + params.q);
}

double sse(const BassParams& params, std::span<const std::pair<double, double>> series) {
    double s = 0.0;
    for (const auto& [t, n] : series) {
        double d = cumulative(params, t) - n;
        s += d * d;
    }
    return s;
}

namespace {

void validate_series(std::span<const std::pair<double, double>> series) {
    if (series.size() < 4) throw DataError("bass fit: need at least 4 points");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].first < 0.0) throw DataError("bass fit: negative time value");
        if (i > 0 && series[i].second <= series[i - 1].second)
            throw DataError("bass fit: cumulative counts must be strictly increasing");
        if (i > 0 && series[i].first <= series[i - 1].first)
            throw DataError("bass fit: time values must be strictly increasing");
    }
}

// Nelder-Mead on f over R^3; x is the starting point, returns the best vertex.
// Plain implementation with standard coefficients and a fixed iteration cap.
std::array<double, 3> nelder_mead(const std::function<double(const std::array<double, 3>&)>& f,
                                  std::array<double, 3> x, double initial_step, int max_iter,
                                  double ftol) {
    constexpr int n = 3;
    std::array<std::array<double, 3>, n + 1> simplex;
    std::array<double, n + 1> fv;
    simplex[0] = x;
    fv[0] = f(x);
    for (int i = 0; i < n; ++i) {
        simplex[i + 1] = x;
        simplex[i + 1][i] += initial_step;
        fv[i + 1] = f(simplex[i + 1]);
    }

    for (int it = 0; it < max_iter; ++it) {
        std::array<int, n + 1> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        int best = order[0], worst = order[n], second_worst = order[n - 1];

        if (std::abs(fv[worst] - fv[best]) <= ftol * (std::abs(fv[best]) + 1e-300)) break;

        std::array<double, 3> centroid{0.0, 0.0, 0.0};
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < n; ++k) centroid[k] += simplex[i][k];
        }
        for (int k = 0; k < n; ++k) centroid[k] /= n;

        auto blend = [&](double coef) {
            std::array<double, 3> out;
            for (int k = 0; k < n; ++k) out[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
            return out;
        };

        std::array<double, 3> refl = blend(-1.0);
        double f_refl = f(refl);
        if (f_refl < fv[best]) {
            std::array<double, 3> expd = blend(-2.0);
            double f_expd = f(expd);
            if (f_expd < f_refl) {
                simplex[worst] = expd;
                fv[worst] = f_expd;
            } else {
                simplex[worst] = refl;
                fv[worst] = f_refl;
            }
        } else if (f_refl < fv[second_worst]) {
            simplex[worst] = refl;
            fv[worst] = f_refl;
        } else {
            std::array<double, 3> contr = blend(0.5);
            double f_contr = f(contr);
            if (f_contr < fv[worst]) {
                simplex[worst] = contr;
                fv[worst] = f_contr;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (int k = 0; k < n; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return simplex[best];
}

} // namespace

std::vector<BassParams> start_grid(std::span<const std::pair<double, double>> series) {
    double n_max = series.back().second;
    std::vector<BassParams> grid;
    const double p_starts[] = {1e-3, 3e-3, 0.01, 0.03, 0.1};
    const double q_starts[] = {0.1, 0.2, 0.38, 0.6, 0.9};
    const double m_mults[] = {1.0, 1.8, 3.2, 5.6, 10.0};
    for (double p : p_starts)
        for (double q : q_starts)
            for (double mm : m_mults) grid.push_back(BassParams{p, q, n_max * mm, 0.0});
    for (auto& g : grid) g.residual_sse = sse(g, series);
    return grid;
}

BassParams fit(std::span<const std::pair<double, double>> series) {
    validate_series(series);

    auto objective = [&](const std::array<double, 3>& log_params) {
        BassParams b{std::exp(log_params[0]), std::exp(log_params[1]), std::exp(log_params[2]), 0.0};
        if (!std::isfinite(b.p) || !std::isfinite(b.q) || !std::isfinite(b.m)) return 1e300;
        return sse(b, series);
    };

    std::vector<BassParams> grid = start_grid(series);
    std::sort(grid.begin(), grid.end(),
              [](const BassParams& a, const BassParams& b) { return a.residual_sse < b.residual_sse; });

    BassParams best;
    best.residual_sse = 1e300;
    const std::size_t refine = std::min<std::size_t>(5, grid.size());
    for (std::size_t i = 0; i < refine; ++i) {
        std::array<double, 3> x0{std::log(grid[i].p), std::log(grid[i].q), std::log(grid[i].m)};
        // Two rounds, the second with a tighter step, polish the optimum to
        // the precision the round-trip contract needs.
        std::array<double, 3> x1 = nelder_mead(objective, x0, 0.5, 3000, 1e-14);
        std::array<double, 3> x2 = nelder_mead(objective, x1, 0.02, 3000, 1e-16);
        BassParams cand{std::exp(x2[0]), std::exp(x2[1]), std::exp(x2[2]), 0.0};
        cand.residual_sse = sse(cand, series);
        if (cand.residual_sse < best.residual_sse) best = cand;
    }
    return best;
}

TrajectoryError compare_trajectories(std::span<const double> abm, std::span<const double> reference) {
    if (abm.size() != reference.size() || abm.empty())
        throw DataError("compare_trajectories: series must be non-empty and equal length");
    double se = 0.0;
    double ape = 0.0;
    for (std::size_t i = 0; i < abm.size(); ++i) {
        double d = abm[i] - reference[i];
        se += d * d;
        if (reference[i] == 0.0) throw DataError("compare_trajectories: reference contains zero");
        ape += std::abs(d) / std::abs(reference[i]);
    }
    double n = static_cast<double>(abm.size());
    return {std::sqrt(se / n), 100.0 * ape / n};
}

} // namespace modechoice::bass
