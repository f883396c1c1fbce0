#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace modechoice::mnl {

/// Choice data with case-specific covariates: utility of alternative j for
/// row i is dot(x_i, beta_j), with beta fixed to 0 for the reference
/// alternative (location normalization).
struct MnlData {
    std::size_t n_rows = 0;
    std::size_t n_alternatives = 0; // J
    std::size_t n_covariates = 0;   // K (including intercept if present)
    std::vector<double> x;          // row-major n_rows x K
    std::vector<int> choice;        // y_i in [0, J)
    int ref_alt = 0;
    std::vector<std::string> var_names; // size K
    std::vector<std::string> alt_names; // size J

    double xval(std::size_t row, std::size_t k) const { return x[row * n_covariates + k]; }
};

/// Fitted model. Parameters are packed per non-reference alternative in
/// ascending order, K covariates each: index(j,k) = block(j)*K + k.
struct MnlModel {
    std::size_t n_alternatives = 0;
    std::size_t n_covariates = 0;
    int ref_alt = 0;
    std::vector<double> beta;       // size P = (J-1)*K
    std::vector<double> covariance; // P x P, inverse observed information
    double log_lik = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> var_names;
    std::vector<std::string> alt_names;

    std::size_t n_params() const { return beta.size(); }
    std::size_t block_of_alt(int alt) const {
        return static_cast<std::size_t>(alt < ref_alt ? alt : alt - 1);
    }
    std::size_t param_index(int alt, std::size_t k) const {
        return block_of_alt(alt) * n_covariates + k;
    }
    /// Coefficient for (alternative, covariate); 0 for the reference.
    double coefficient(int alt, std::size_t k) const {
        return alt == ref_alt ? 0.0 : beta[param_index(alt, k)];
    }
    double standard_error(std::size_t param) const;
};

struct FitOptions {
    double grad_tol = 1e-6; // max-norm convergence threshold
    int max_iterations = 200;
};

double log_likelihood(const MnlData& data, std::span<const double> beta);
void gradient(const MnlData& data, std::span<const double> beta, std::span<double> grad_out);
/// Choice probabilities for one row under beta; out has size J and sums to 1.
void predicted_probabilities(const MnlData& data, std::span<const double> beta, std::size_t row,
                             std::span<double> out);

/// Newton-Raphson ascent with step halving; the log-likelihood is
/// non-decreasing across accepted steps. Throws DataError naming the
/// offending covariate on separation or a rank-deficient design.
MnlModel fit(const MnlData& data, const FitOptions& options = {});

struct WaldResult {
    double statistic;
    double df;
    double p_value;
};

/// Wald test of beta_block = 0 using the observed-information covariance.
WaldResult wald_test(const MnlModel& model, std::span<const std::size_t> param_indices);
/// Single-coefficient convenience overload.
WaldResult wald_test(const MnlModel& model, std::size_t param_index);

} // namespace modechoice::mnl
