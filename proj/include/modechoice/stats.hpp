#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modechoice::stats {

// ---- special functions -------------------------------------------------

/// Regularized lower incomplete gamma P(a,x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);
/// Regularized incomplete beta I_x(a,b).
double inc_beta(double a, double b, double x);

/// Survival function of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);
double normal_cdf(double z);
double student_t_cdf(double t, double df);
/// Inverse CDF of Student's t (bisection on the CDF).
double student_t_quantile(double p, double df);

// ---- descriptive helpers -----------------------------------------------

double mean(std::span<const double> xs);
double sample_sd(std::span<const double> xs);

struct ConfidenceInterval {
    double mean;
    double lo;
    double hi;
};

/// Two-sided t confidence interval for the mean of xs.
ConfidenceInterval t_confidence_interval(std::span<const double> xs, double level = 0.95);

/// Midranks of the pooled sample (average rank for ties). If tie_sum is
/// non-null it receives sum over tie groups of (t^3 - t).
std::vector<double> midranks(std::span<const double> pooled, double* tie_sum = nullptr);

// ---- sample size ---------------------------------------------------------

/// Cochran's sample size with finite-population correction, rounded up.
/// n0 = z^2 p (1-p) / e^2, then n = n0 / (1 + (n0 - 1)/N).
long cochran_sample_size(double population, double z, double margin, double p);

// ---- hypothesis tests ----------------------------------------------------

struct TestResult {
    double statistic;
    double df;
    double p_value;
};

/// Kruskal-Wallis H test (tie-corrected), chi-square approximation with
/// k-1 degrees of freedom. Requires >= 2 non-empty groups.
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);

struct MwuResult {
    double u; // min(U_a, U_b)
    double p_value;
};

/// Mann-Whitney U with tie-corrected normal approximation (two-sided,
/// continuity-corrected).
MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square test of independence on an r x c contingency table.
/// Requires at least a 2x2 table with positive row and column sums.
TestResult chi_square_independence(const std::vector<std::vector<double>>& table);

} // namespace modechoice::stats
