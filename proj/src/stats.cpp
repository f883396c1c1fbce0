#include "modechoice/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "modechoice/types.hpp"

namespace modechoice::stats {

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h;
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma_q: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double inc_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("inc_beta: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(df / 2.0, x / 2.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("student_t_cdf: df must be > 0");
    double x = df / (df + t * t);
    double tail = 0.5 * inc_beta(df / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("student_t_quantile: p must be in (0,1)");
    double lo = -1e8, hi = 1e8;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

ConfidenceInterval t_confidence_interval(std::span<const double> xs, double level) {
    double m = mean(xs);
    if (xs.size() < 2) return {m, m, m};
    double sd = sample_sd(xs);
    double df = static_cast<double>(xs.size() - 1);
    double q = student_t_quantile(0.5 + level / 2.0, df);
    double half = q * sd / std::sqrt(static_cast<double>(xs.size()));
    return {m, m - half, m + half};
}

std::vector<double> midranks(std::span<const double> pooled, double* tie_sum) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(n, 0.0);
    double ties = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        double t = static_cast<double>(j - i + 1);
        ties += t * t * t - t;
        i = j + 1;
    }
    if (tie_sum) *tie_sum = ties;
    return ranks;
}

long cochran_sample_size(double population, double z, double margin, double p) {
    if (population < 1.0) throw std::invalid_argument("cochran: population must be >= 1");
    if (margin <= 0.0 || margin >= 1.0) throw std::invalid_argument("cochran: margin must be in (0,1)");
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("cochran: p must be in (0,1)");
    if (z <= 0.0) throw std::invalid_argument("cochran: z must be > 0");
    double n0 = z * z * p * (1.0 - p) / (margin * margin);
    double n = n0 / (1.0 + (n0 - 1.0) / population);
    long out = static_cast<long>(std::ceil(n - 1e-12));
    return std::max(1L, out);
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw std::invalid_argument("kruskal_wallis: need at least 2 groups");
    std::vector<double> pooled;
    std::vector<std::size_t> sizes;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("kruskal_wallis: empty group");
        sizes.push_back(g.size());
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const double n = static_cast<double>(pooled.size());
    if (pooled.size() < 3) throw std::invalid_argument("kruskal_wallis: need at least 3 observations");

    double tie_sum = 0.0;
    std::vector<double> ranks = midranks(pooled, &tie_sum);

    double h = 0.0;
    std::size_t offset = 0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        double rsum = 0.0;
        for (std::size_t k = 0; k < sizes[gi]; ++k) rsum += ranks[offset + k];
        h += rsum * rsum / static_cast<double>(sizes[gi]);
        offset += sizes[gi];
    }
    h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
    double correction = 1.0 - tie_sum / (n * n * n - n);
    if (correction > 0.0) h /= correction;
    if (h < 0.0) h = 0.0; // guard against rounding on constant data

    double df = static_cast<double>(groups.size() - 1);
    return {h, df, chi2_sf(h, df)};
}

MwuResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney_u: empty sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    double tie_sum = 0.0;
    std::vector<double> ranks = midranks(pooled, &tie_sum);
    double ra = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ra += ranks[i];
    double ua = ra - na * (na + 1.0) / 2.0;
    double ub = na * nb - ua;
    double u = std::min(ua, ub);

    const double n = na + nb;
    double mu = na * nb / 2.0;
    double var = na * nb / 12.0 * ((n + 1.0) - tie_sum / (n * (n - 1.0)));
    if (var <= 0.0) return {u, 1.0}; // all observations identical
    double z = (u - mu + 0.5) / std::sqrt(var);
    if (z > 0.0) z = 0.0; // U is the smaller of the pair, so the deviation is one-sided
    double p = 2.0 * normal_cdf(z);
    if (p > 1.0) p = 1.0;
    return {u, p};
}

TestResult chi_square_independence(const std::vector<std::vector<double>>& table) {
    const std::size_t r = table.size();
    if (r < 2) throw std::invalid_argument("chi_square: need at least 2 rows");
    const std::size_t c = table.front().size();
    if (c < 2) throw std::invalid_argument("chi_square: need at least 2 columns");
    for (const auto& row : table)
        if (row.size() != c) throw std::invalid_argument("chi_square: ragged table");

    std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            double o = table[i][j];
            if (o < 0.0) throw std::invalid_argument("chi_square: negative count");
            row_sum[i] += o;
            col_sum[j] += o;
            total += o;
        }
    if (total <= 0.0) throw std::invalid_argument("chi_square: empty table");
    for (double s : row_sum)
        if (s <= 0.0) throw std::invalid_argument("chi_square: zero row sum");
    for (double s : col_sum)
        if (s <= 0.0) throw std::invalid_argument("chi_square: zero column sum");

    double stat = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            double e = row_sum[i] * col_sum[j] / total;
            double d = table[i][j] - e;
            stat += d * d / e;
        }
    double df = static_cast<double>((r - 1) * (c - 1));
    return {stat, df, chi2_sf(stat, df)};
}

} // namespace modechoice::stats
