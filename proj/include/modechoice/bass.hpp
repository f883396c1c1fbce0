#pragma once

#include <span>
#include <utility>
#include <vector>

namespace modechoice::bass {

struct BassParams {
    double p = 0.0; // innovation coefficient
    double q = 0.0; // imitation coefficient
    double m = 0.0; // market potential
    double residual_sse = 0.0;
};

/// Cumulative adopters N(t) = m (1 - e^{-(p+q)t}) / (1 + (q/p) e^{-(p+q)t}).
double cumulative(const BassParams& params, double t);

/// Time of peak adoption rate, t* = ln(q/p) / (p+q).
double peak_time(const BassParams& params);

/// Least-squares fit of the cumulative Bass curve to (t, N) points by
/// multi-start Nelder-Mead in log-parameter space. Series must have >= 4
/// points with strictly increasing cumulative counts.
BassParams fit(std::span<const std::pair<double, double>> series);

/// Candidate start grid used by fit(); exposed so tests can verify the
/// returned fit is at least as good as every start.
std::vector<BassParams> start_grid(std::span<const std::pair<double, double>> series);

double sse(const BassParams& params, std::span<const std::pair<double, double>> series);

struct TrajectoryError {
    double rmse;
    double mape; // percent, reference series in the denominator
};

/// Error metrics between an ABM series and a reference series of equal length.
TrajectoryError compare_trajectories(std::span<const double> abm,
                                     std::span<const double> reference);

} // namespace modechoice::bass
