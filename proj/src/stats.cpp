#include "brf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace brf {

namespace {

double ln_gamma(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-14;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const auto dm = static_cast<double>(m);
        const double m2 = 2.0 * dm;
        double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(std::span<const double> v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Midranks of the pooled or single sample.
std::vector<double> midranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Exact null distribution of the rank sum of group 1 over all
// C(n1+n2, n1) assignments, via dynamic programming.
// counts[s] = number of subsets of {1..n} of size n1 with rank sum s.
std::vector<double> rank_sum_counts(std::size_t n1, std::size_t n) {
    const std::size_t max_sum = n1 * (2 * n - n1 + 1) / 2;
    std::vector<std::vector<double>> dp(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t r = 1; r <= n; ++r) {
        for (std::size_t k = std::min(n1, r); k >= 1; --k) {
            for (std::size_t s = max_sum; s >= r; --s) {
                dp[k][s] += dp[k - 1][s - r];
            }
        }
    }
    return dp[n1];
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete_beta: a, b must be positive");
    }
    if (x < 0.0 || x > 1.0) {
        throw std::invalid_argument("incomplete_beta: x must lie in [0, 1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // front factor x^a (1-x)^b / B(a, b); symmetric under (a,b,x)->(b,a,1-x)
    const double front = std::exp(ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("student_t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t < 0.0 ? tail : 1.0 - tail;
}

TestResult paired_t_one_sided(std::span<const double> a, std::span<const double> b,
                              Alternative alternative) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired_t: length mismatch");
    }
    if (a.size() < 2) throw std::invalid_argument("paired_t: need n >= 2");
    if (alternative == Alternative::TwoSided) {
        throw std::invalid_argument("paired_t: one-sided alternatives only");
    }
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    const double md = mean_of(d);
    const double sd = std::sqrt(sample_var(d, md));

    TestResult res;
    if (sd == 0.0) {
        res.degenerate = true;
        res.method = "degenerate: zero-variance differences";
        res.statistic = 0.0;
        if (md == 0.0) {
            res.p_value = 0.5;
        } else {
            const bool favors = alternative == Alternative::Less ? md < 0.0 : md > 0.0;
            res.p_value = favors ? 0.0 : 1.0;
        }
        return res;
    }
    const double t = md / (sd / std::sqrt(static_cast<double>(n)));
    const double df = static_cast<double>(n - 1);
    res.statistic = t;
    res.method = "exact";
    const double cdf = student_t_cdf(t, df);
    res.p_value = alternative == Alternative::Less ? cdf : 1.0 - cdf;
    return res;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          Alternative alternative) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("mann_whitney_u: empty group");
    }
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    const std::size_t n = n1 + n2;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<double> ranks = midranks(pooled);

    double r1 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r1 += ranks[i];
    const double u1 = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;

    // tie groups over the pooled sample
    std::vector<double> sorted(pooled);
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    bool has_ties = false;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
            const auto t = static_cast<double>(j - i + 1);
            if (t > 1.0) {
                has_ties = true;
                tie_term += t * t * t - t;
            }
            i = j + 1;
        }
    }

    TestResult res;
    res.statistic = u1;

    if (n <= 12 && !has_ties) {
        // Exact: enumerate the null distribution of the group-1 rank sum.
        const std::vector<double> counts = rank_sum_counts(n1, n);
        double total = 0.0;
        for (double c : counts) total += c;
        const auto s_obs = static_cast<std::size_t>(std::llround(r1));
        double p_le = 0.0, p_ge = 0.0;
        for (std::size_t s = 0; s < counts.size(); ++s) {
            if (s <= s_obs) p_le += counts[s];
            if (s >= s_obs) p_ge += counts[s];
        }
        p_le /= total;
        p_ge /= total;
        res.method = "exact";
        switch (alternative) {
            case Alternative::Less: res.p_value = p_le; break;
            case Alternative::Greater: res.p_value = p_ge; break;
            case Alternative::TwoSided:
                res.p_value = std::min(1.0, 2.0 * std::min(p_le, p_ge));
                break;
        }
        return res;
    }

    const double dn1 = static_cast<double>(n1);
    const double dn2 = static_cast<double>(n2);
    const double dn = static_cast<double>(n);
    const double mean_u = dn1 * dn2 / 2.0;
    const double var_u =
        dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    res.method = "normal approximation with tie and continuity corrections";
    if (var_u <= 0.0) {
        res.degenerate = true;
        res.p_value = 1.0;
        return res;
    }
    const double sd_u = std::sqrt(var_u);
    auto z_with_cc = [&](double u, double shift) { return (u - mean_u + shift) / sd_u; };
    switch (alternative) {
        case Alternative::Less:
            res.p_value = normal_cdf(z_with_cc(u1, 0.5));
            break;
        case Alternative::Greater:
            res.p_value = 1.0 - normal_cdf(z_with_cc(u1, -0.5));
            break;
        case Alternative::TwoSided: {
            const double p_lo = normal_cdf(z_with_cc(u1, 0.5));
            const double p_hi = 1.0 - normal_cdf(z_with_cc(u1, -0.5));
            res.p_value = std::min(1.0, 2.0 * std::min(p_lo, p_hi));
            break;
        }
    }
    return res;
}

std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("cohens_d: each group needs >= 2 values");
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = sample_var(a, ma);
    const double vb = sample_var(b, mb);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double pooled =
        std::sqrt(((n1 - 1.0) * va + (n2 - 1.0) * vb) / (n1 + n2 - 2.0));
    if (pooled == 0.0) return std::nullopt;
    return (ma - mb) / pooled;
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman: need n >= 3");
    const std::vector<double> rx = midranks(x);
    const std::vector<double> ry = midranks(y);
    const double mx = mean_of(rx);
    const double my = mean_of(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    TestResult res;
    if (sxx == 0.0 || syy == 0.0) {
        res.degenerate = true;
        res.method = "degenerate: constant input";
        res.p_value = 1.0;
        return res;
    }
    const double rho = sxy / std::sqrt(sxx * syy);
    res.statistic = rho;
    res.method = "t approximation";
    if (std::abs(rho) >= 1.0 - 1e-15) {
        res.p_value = 0.0;
        return res;
    }
    const double dn = static_cast<double>(x.size());
    const double t = rho * std::sqrt((dn - 2.0) / (1.0 - rho * rho));
    res.p_value = 2.0 * (1.0 - student_t_cdf(std::abs(t), dn - 2.0));
    return res;
}

}  // namespace brf
