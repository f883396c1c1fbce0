#include "modechoice/mnl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "modechoice/stats.hpp"
#include "modechoice/types.hpp"

namespace modechoice::mnl {

namespace {

// Dense symmetric positive-definite solve/inverse via Cholesky. Matrices here
// are tiny ((J-1)*K square), so no pivoting heroics are needed; a failed
// factorization is reported through the returned pivot index.
struct Cholesky {
    std::size_t n = 0;
    std::vector<double> l; // lower triangle, row-major full storage
    int failed_pivot = -1;

    explicit Cholesky(const std::vector<double>& a, std::size_t n_) : n(n_), l(a) {
        for (std::size_t j = 0; j < n; ++j) {
            double d = l[j * n + j];
            for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
            if (d <= 0.0 || !std::isfinite(d)) {
                failed_pivot = static_cast<int>(j);
                return;
            }
            d = std::sqrt(d);
            l[j * n + j] = d;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = l[i * n + j];
                for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
                l[i * n + j] = s / d;
            }
        }
    }

    bool ok() const { return failed_pivot < 0; }

    std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> y(b.begin(), b.end());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) y[i] -= l[i * n + k] * y[k];
            y[i] /= l[i * n + i];
        }
        for (std::size_t ii = n; ii > 0; --ii) {
            std::size_t i = ii - 1;
            for (std::size_t k = i + 1; k < n; ++k) y[i] -= l[k * n + i] * y[k];
            y[i] /= l[i * n + i];
        }
        return y;
    }

    std::vector<double> inverse() const {
        std::vector<double> inv(n * n, 0.0);
        std::vector<double> e(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), 0.0);
            e[j] = 1.0;
            std::vector<double> col = solve(e);
            for (std::size_t i = 0; i < n; ++i) inv[i * n + j] = col[i];
        }
        return inv;
    }
};

void row_probabilities(const MnlData& d, std::span<const double> beta, std::size_t i,
                       std::span<double> p) {
    const std::size_t J = d.n_alternatives;
    const std::size_t K = d.n_covariates;
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < J; ++j) {
        double v = 0.0;
        if (static_cast<int>(j) != d.ref_alt) {
            std::size_t block = static_cast<std::size_t>(static_cast<int>(j) < d.ref_alt ? j : j - 1);
            const double* bj = beta.data() + block * K;
            for (std::size_t k = 0; k < K; ++k) v += d.xval(i, k) * bj[k];
        }
        p[j] = v;
        vmax = std::max(vmax, v);
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        p[j] = std::exp(p[j] - vmax);
        denom += p[j];
    }
    for (std::size_t j = 0; j < J; ++j) p[j] /= denom;
}

std::string param_label(const MnlData& d, std::size_t param) {
    const std::size_t K = d.n_covariates;
    std::size_t block = param / K;
    std::size_t k = param % K;
    std::size_t alt = block >= static_cast<std::size_t>(d.ref_alt) ? block + 1 : block;
    std::string var = k < d.var_names.size() ? d.var_names[k] : "x" + std::to_string(k);
    std::string an = alt < d.alt_names.size() ? d.alt_names[alt] : "alt" + std::to_string(alt);
    return var + " (" + an + ")";
}

} // namespace

double MnlModel::standard_error(std::size_t param) const {
    return std::sqrt(covariance[param * n_params() + param]);
}

double log_likelihood(const MnlData& d, std::span<const double> beta) {
    const std::size_t J = d.n_alternatives;
    std::vector<double> p(J);
    double ll = 0.0;
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        row_probabilities(d, beta, i, p);
        double pi = p[static_cast<std::size_t>(d.choice[i])];
        ll += std::log(std::max(pi, 1e-300));
    }
    return ll;
}

void predicted_probabilities(const MnlData& d, std::span<const double> beta, std::size_t row,
                             std::span<double> out) {
    row_probabilities(d, beta, row, out);
}

void gradient(const MnlData& d, std::span<const double> beta, std::span<double> g) {
    const std::size_t J = d.n_alternatives;
    const std::size_t K = d.n_covariates;
    std::fill(g.begin(), g.end(), 0.0);
    std::vector<double> p(J);
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        row_probabilities(d, beta, i, p);
        for (std::size_t j = 0; j < J; ++j) {
            if (static_cast<int>(j) == d.ref_alt) continue;
            std::size_t block = static_cast<std::size_t>(static_cast<int>(j) < d.ref_alt ? j : j - 1);
            double resid = (d.choice[i] == static_cast<int>(j) ? 1.0 : 0.0) - p[j];
            double* gj = g.data() + block * K;
            for (std::size_t k = 0; k < K; ++k) gj[k] += d.xval(i, k) * resid;
        }
    }
}

namespace {

// Observed information: I = -Hessian of the log-likelihood.
std::vector<double> information_matrix(const MnlData& d, std::span<const double> beta) {
    const std::size_t J = d.n_alternatives;
    const std::size_t K = d.n_covariates;
    const std::size_t P = (J - 1) * K;
    std::vector<double> info(P * P, 0.0);
    std::vector<double> p(J);
    std::vector<std::size_t> blocks;
    std::vector<std::size_t> alts;
    for (std::size_t j = 0; j < J; ++j) {
        if (static_cast<int>(j) == d.ref_alt) continue;
        alts.push_back(j);
        blocks.push_back(static_cast<std::size_t>(static_cast<int>(j) < d.ref_alt ? j : j - 1));
    }
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        row_probabilities(d, beta, i, p);
        for (std::size_t a = 0; a < alts.size(); ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                double pj = p[alts[a]];
                double pl = p[alts[b]];
                double w = pj * ((a == b ? 1.0 : 0.0) - pl);
                if (w == 0.0) continue;
                std::size_t ra = blocks[a] * K;
                std::size_t rb = blocks[b] * K;
                for (std::size_t k = 0; k < K; ++k) {
                    double xw = d.xval(i, k) * w;
                    for (std::size_t m = 0; m < K; ++m)
                        info[(ra + k) * P + rb + m] += xw * d.xval(i, m);
                }
            }
        }
    }
    // mirror to the upper triangle
    for (std::size_t r = 0; r < P; ++r)
        for (std::size_t c = r + 1; c < P; ++c) info[r * P + c] = info[c * P + r];
    return info;
}

} // namespace

MnlModel fit(const MnlData& d, const FitOptions& options) {
    if (d.n_alternatives < 2) throw DataError("mnl: need at least 2 alternatives");
    if (d.ref_alt < 0 || d.ref_alt >= static_cast<int>(d.n_alternatives))
        throw DataError("mnl: reference alternative out of range");
    if (d.n_rows == 0) throw DataError("mnl: empty dataset");
    if (d.x.size() != d.n_rows * d.n_covariates) throw DataError("mnl: covariate matrix size mismatch");
    for (int y : d.choice)
        if (y < 0 || y >= static_cast<int>(d.n_alternatives)) throw DataError("mnl: choice out of range");

    const std::size_t P = (d.n_alternatives - 1) * d.n_covariates;
    std::vector<double> beta(P, 0.0);
    std::vector<double> grad(P, 0.0);
    double ll = log_likelihood(d, beta);

    MnlModel model;
    model.n_alternatives = d.n_alternatives;
    model.n_covariates = d.n_covariates;
    model.ref_alt = d.ref_alt;
    model.var_names = d.var_names;
    model.alt_names = d.alt_names;

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        gradient(d, beta, grad);
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax < options.grad_tol) {
            model.converged = true;
            break;
        }

        std::vector<double> info = information_matrix(d, beta);
        Cholesky chol(info, P);
        if (!chol.ok())
            throw DataError("mnl: rank-deficient design matrix; check covariate '" +
                            param_label(d, static_cast<std::size_t>(chol.failed_pivot)) + "'");
        std::vector<double> step = chol.solve(grad);

        // Step halving keeps the log-likelihood non-decreasing.
        double scale = 1.0;
        double ll_new = ll;
        std::vector<double> beta_new(P);
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t j = 0; j < P; ++j) beta_new[j] = beta[j] + scale * step[j];
            ll_new = log_likelihood(d, beta_new);
            if (ll_new >= ll - 1e-12) {
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break; // gradient is tiny but not below tol; stop here
        beta.swap(beta_new);
        ll = ll_new;

        for (std::size_t j = 0; j < P; ++j) {
            if (std::abs(beta[j]) > 50.0)
                throw DataError("mnl: coefficient diverging, possible separation on covariate '" +
                                param_label(d, j) + "'");
        }
    }

    model.beta = beta;
    model.log_lik = ll;
    model.iterations = it;

    std::vector<double> info = information_matrix(d, beta);
    Cholesky chol(info, P);
    if (!chol.ok())
        throw DataError("mnl: information matrix singular at optimum; check covariate '" +
                        param_label(d, static_cast<std::size_t>(chol.failed_pivot)) + "'");
    model.covariance = chol.inverse();

    // Separated data converges to a saturated fit: a huge coefficient whose
    // standard error dwarfs it. Flag it instead of reporting garbage.
    for (std::size_t p = 0; p < P; ++p) {
        if (std::abs(model.beta[p]) > 10.0 && model.standard_error(p) > std::abs(model.beta[p]))
            throw DataError("mnl: no finite optimum, possible separation on covariate '" +
                            param_label(d, p) + "'");
    }
    return model;
}

WaldResult wald_test(const MnlModel& model, std::span<const std::size_t> idx) {
    const std::size_t q = idx.size();
    if (q == 0) throw DataError("wald_test: empty coefficient block");
    const std::size_t P = model.n_params();
    for (std::size_t i : idx)
        if (i >= P) throw DataError("wald_test: parameter index out of range");

    std::vector<double> v(q * q);
    std::vector<double> b(q);
    for (std::size_t a = 0; a < q; ++a) {
        b[a] = model.beta[idx[a]];
        for (std::size_t c = 0; c < q; ++c) v[a * q + c] = model.covariance[idx[a] * P + idx[c]];
    }
    Cholesky chol(v, q);
    if (!chol.ok()) throw DataError("wald_test: singular covariance block");
    std::vector<double> vib = chol.solve(b);
    double w = 0.0;
    for (std::size_t a = 0; a < q; ++a) w += b[a] * vib[a];
    if (w < 0.0) w = 0.0;
    double df = static_cast<double>(q);
    return {w, df, stats::chi2_sf(w, df)};
}

WaldResult wald_test(const MnlModel& model, std::size_t param_index) {
    std::array<std::size_t, 1> idx{param_index};
    return wald_test(model, std::span<const std::size_t>(idx));
}

} // namespace modechoice::mnl
