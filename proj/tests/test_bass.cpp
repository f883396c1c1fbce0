#include <doctest.h>

#include <cmath>
#include <vector>

#include "modechoice/bass.hpp"
#include "modechoice/rng.hpp"
#include "modechoice/types.hpp"

using namespace modechoice;

namespace {

std::vector<std::pair<double, double>> series_from(const bass::BassParams& p, int n_years) {
    std::vector<std::pair<double, double>> s;
    for (int t = 1; t <= n_years; ++t) s.emplace_back(t, bass::cumulative(p, t));
    return s;
}

} // namespace

TEST_CASE("bass curve closed-form properties") {
    bass::BassParams p{0.03, 0.38, 10000.0, 0.0};
    CHECK(bass::cumulative(p, 0.0) == doctest::Approx(0.0));
    CHECK(bass::cumulative(p, 200.0) == doctest::Approx(10000.0).epsilon(1e-6));
    // peak adoption rate at ln(q/p)/(p+q)
    double t_star = bass::peak_time(p);
    CHECK(t_star == doctest::Approx(std::log(0.38 / 0.03) / 0.41).epsilon(1e-12));
    CHECK(t_star == doctest::Approx(6.1926).epsilon(1e-4));
    // numerically confirm the peak: rate at t* beats neighbors
    auto rate = [&](double t) { return bass::cumulative(p, t + 1e-4) - bass::cumulative(p, t - 1e-4); };
    CHECK(rate(t_star) > rate(t_star - 0.5));
    CHECK(rate(t_star) > rate(t_star + 0.5));
    // non-decreasing in t
    double prev = 0.0;
    for (double t = 0.0; t < 40.0; t += 0.5) {
        double v = bass::cumulative(p, t);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("noiseless round trip recovers parameters to 1e-4 relative") {
    bass::BassParams truth{0.03, 0.38, 10000.0, 0.0};
    auto series = series_from(truth, 17);
    bass::BassParams fit = bass::fit(series);
    CHECK(std::abs(fit.p - truth.p) / truth.p < 1e-4);
    CHECK(std::abs(fit.q - truth.q) / truth.q < 1e-4);
    CHECK(std::abs(fit.m - truth.m) / truth.m < 1e-4);
}

TEST_CASE("fit residual is at least as good as every multi-start candidate") {
    bass::BassParams truth{0.012, 0.45, 52000.0, 0.0};
    auto series = series_from(truth, 14);
    bass::BassParams fit = bass::fit(series);
    for (const auto& cand : bass::start_grid(series))
        CHECK(fit.residual_sse <= cand.residual_sse + 1e-9);
}

TEST_CASE("noisy round trip stays within 5 percent (median of 20 seeds)") {
    bass::BassParams truth{0.03, 0.38, 10000.0, 0.0};
    std::vector<double> errors;
    for (int seed = 0; seed < 20; ++seed) {
        RngStream rng(1000 + seed);
        std::vector<std::pair<double, double>> series;
        double prev = 0.0;
        for (int t = 1; t <= 17; ++t) {
            double v = bass::cumulative(truth, t) * (1.0 + 0.01 * rng.normal(0, 1));
            v = std::max(v, prev + 1e-6); // keep strictly increasing
            series.emplace_back(t, v);
            prev = v;
        }
        bass::BassParams fit = bass::fit(series);
        double err = std::max({std::abs(fit.p - truth.p) / truth.p,
                               std::abs(fit.q - truth.q) / truth.q,
                               std::abs(fit.m - truth.m) / truth.m});
        errors.push_back(err);
    }
    std::sort(errors.begin(), errors.end());
    double median = 0.5 * (errors[9] + errors[10]);
    CHECK(median < 0.05);
}

TEST_CASE("fit input validation") {
    std::vector<std::pair<double, double>> short_series{{1, 10}, {2, 20}, {3, 30}};
    CHECK_THROWS_AS(bass::fit(short_series), DataError);

    std::vector<std::pair<double, double>> non_monotone{{1, 10}, {2, 20}, {3, 15}, {4, 30}};
    CHECK_THROWS_AS(bass::fit(non_monotone), DataError);
}

TEST_CASE("trajectory comparison metrics") {
    std::vector<double> a{100, 100, 100};
    std::vector<double> same{100, 100, 100};
    auto e0 = bass::compare_trajectories(a, same);
    CHECK(e0.rmse == doctest::Approx(0.0));
    CHECK(e0.mape == doctest::Approx(0.0));

    std::vector<double> offset{110, 110, 110};
    auto e1 = bass::compare_trajectories(offset, same);
    CHECK(e1.rmse == doctest::Approx(10.0));
    CHECK(e1.mape == doctest::Approx(10.0));

    std::vector<double> zero_ref{0, 1, 2};
    CHECK_THROWS_AS(bass::compare_trajectories(a, zero_ref), DataError);
    std::vector<double> mismatched{1, 2};
    CHECK_THROWS_AS(bass::compare_trajectories(a, mismatched), DataError);
}
