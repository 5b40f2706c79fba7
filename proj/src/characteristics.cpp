#include "brf/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace brf {

namespace {

// Equal-frequency discretization keeping tied values in one bin: each
// distinct value is assigned the bin of its mean rank.
std::vector<int> equal_frequency_bins(std::span<const double> v, std::size_t n_bins) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });

    std::vector<int> bins(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + j);
        auto b = static_cast<int>(mean_rank * static_cast<double>(n_bins) /
                                  static_cast<double>(n));
        b = std::min<int>(b, static_cast<int>(n_bins) - 1);
        for (std::size_t k = i; k <= j; ++k) bins[order[k]] = b;
        i = j + 1;
    }
    return bins;
}

std::size_t distinct_count(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
}

double plugin_mi(const std::vector<int>& a, const std::vector<int>& b,
                 std::size_t ka, std::size_t kb) {
    const std::size_t n = a.size();
    std::vector<double> joint(ka * kb, 0.0), pa(ka, 0.0), pb(kb, 0.0);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        joint[static_cast<std::size_t>(a[i]) * kb + static_cast<std::size_t>(b[i])] += inv;
        pa[static_cast<std::size_t>(a[i])] += inv;
        pb[static_cast<std::size_t>(b[i])] += inv;
    }
    double mi = 0.0;
    for (std::size_t x = 0; x < ka; ++x) {
        for (std::size_t y = 0; y < kb; ++y) {
            const double p = joint[x * kb + y];
            if (p > 0.0) mi += p * std::log(p / (pa[x] * pb[y]));
        }
    }
    return std::max(0.0, mi);
}

double population_variance(std::span<const double> v) {
    const double m =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

double mutual_info_sum(const Dataset& data, std::size_t n_bins) {
    if (data.n_rows < 2) {
        throw std::invalid_argument("mutual_info_sum: need >= 2 rows");
    }
    std::vector<double> target(data.y);
    const std::vector<int> tb = equal_frequency_bins(target, n_bins);

    double total = 0.0;
    std::vector<double> col(data.n_rows);
    for (std::size_t j = 0; j < data.n_cols; ++j) {
        for (std::size_t i = 0; i < data.n_rows; ++i) col[i] = data.at(i, j);
        const std::size_t distinct = distinct_count(col);
        if (distinct <= 1) continue;  // constant feature contributes nothing
        const std::size_t k = std::min<std::size_t>(distinct, n_bins);
        const std::vector<int> fb = equal_frequency_bins(col, k);
        total += plugin_mi(fb, tb, k, n_bins);
    }
    return total;
}

double knn_target_variance(const Dataset& data, std::size_t k) {
    if (data.n_rows <= k) {
        throw std::invalid_argument("knn_target_variance: need more rows than k");
    }
    const std::size_t n = data.n_rows;
    std::vector<std::pair<double, std::size_t>> dist(n);
    std::vector<double> neigh_y(k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < data.n_cols; ++c) {
                const double diff = data.at(i, c) - data.at(j, c);
                d2 += diff * diff;
            }
            dist[j] = {d2, j};
        }
        dist[i] = {std::numeric_limits<double>::infinity(), i};  // exclude self
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                          dist.end());
        for (std::size_t m = 0; m < k; ++m) neigh_y[m] = data.y[dist[m].second];
        total += population_variance(neigh_y);
    }
    return total / static_cast<double>(n);
}

double hsic(const Dataset& data, HsicKernel kernel) {
    if (data.n_rows < 2) throw std::invalid_argument("hsic: need >= 2 rows");
    const std::size_t n = data.n_rows;

    auto feature_dist = [&](std::size_t i, std::size_t j, bool l1) {
        double acc = 0.0;
        for (std::size_t c = 0; c < data.n_cols; ++c) {
            const double d = data.at(i, c) - data.at(j, c);
            acc += l1 ? std::abs(d) : d * d;
        }
        return l1 ? acc : std::sqrt(acc);
    };

    std::vector<double> K(n * n), L(n * n);
    if (kernel == HsicKernel::Linear) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                double dot = 0.0;
                for (std::size_t c = 0; c < data.n_cols; ++c) {
                    dot += data.at(i, c) * data.at(j, c);
                }
                K[i * n + j] = K[j * n + i] = dot;
                L[i * n + j] = L[j * n + i] = data.y[i] * data.y[j];
            }
        }
    } else {
        const bool l1 = kernel == HsicKernel::Laplace;
        std::vector<double> dx, dy;
        dx.reserve(n * (n - 1) / 2);
        dy.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                dx.push_back(feature_dist(i, j, l1));
                dy.push_back(std::abs(data.y[i] - data.y[j]));
            }
        }
        const double gx = median_of(dx);
        const double gy = median_of(dy);
        if (gx == 0.0 || gy == 0.0) return 0.0;  // degenerate sample

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                const double dxx = feature_dist(i, j, l1);
                const double dyy = std::abs(data.y[i] - data.y[j]);
                double kx, ky;
                if (l1) {
                    kx = std::exp(-dxx / gx);
                    ky = std::exp(-dyy / gy);
                } else {
                    kx = std::exp(-dxx * dxx / (2.0 * gx * gx));
                    ky = std::exp(-dyy * dyy / (2.0 * gy * gy));
                }
                K[i * n + j] = K[j * n + i] = kx;
                L[i * n + j] = L[j * n + i] = ky;
            }
        }
    }

    // Double-center L in place (H L H), then trace(K Lc) = sum_ij K_ij Lc_ij.
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_mean[i] += L[i * n + j];
        row_mean[i] /= static_cast<double>(n);
        grand += row_mean[i];
    }
    grand /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lc = L[i * n + j] - row_mean[i] - row_mean[j] + grand;
            acc += K[i * n + j] * lc;
        }
    }
    return acc / (static_cast<double>(n) * static_cast<double>(n));
}

std::size_t high_corr_count(const Dataset& data, double threshold) {
    if (data.n_rows < 3) throw std::invalid_argument("high_corr_count: need >= 3 rows");
    const std::size_t n = data.n_rows;
    const double my =
        std::accumulate(data.y.begin(), data.y.end(), 0.0) / static_cast<double>(n);
    double syy = 0.0;
    for (double v : data.y) syy += (v - my) * (v - my);
    if (syy == 0.0) return 0;

    std::size_t count = 0;
    for (std::size_t j = 0; j < data.n_cols; ++j) {
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) mx += data.at(i, j);
        mx /= static_cast<double>(n);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = data.at(i, j) - mx;
            sxx += dx * dx;
            sxy += dx * (data.y[i] - my);
        }
        if (sxx == 0.0) continue;
        const double r = sxy / std::sqrt(sxx * syy);
        if (std::abs(r) > threshold) ++count;
    }
    return count;
}

double adjusted_r2_value(double full_r2, std::size_t n, std::size_t p) {
    if (n <= p + 1) throw std::invalid_argument("adjusted_r2: need n > p + 1");
    return 1.0 - (1.0 - full_r2) * static_cast<double>(n - 1) /
                     static_cast<double>(n - p - 1);
}

R2Suite r2_suite(const Dataset& data, ForestConfig config, std::size_t n_threads) {
    config.bootstrap_rate = 1.0;
    RandomForest forest = fit_forest(data, config, n_threads);

    R2Suite out;
    const std::size_t n = data.n_rows;
    const std::size_t p = data.n_cols;

    const std::vector<double> train_pred = forest.predict_all(data);
    const double my =
        std::accumulate(data.y.begin(), data.y.end(), 0.0) / static_cast<double>(n);
    double sst = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sst += (data.y[i] - my) * (data.y[i] - my);
        sse += (data.y[i] - train_pred[i]) * (data.y[i] - train_pred[i]);
    }
    out.full_r2 = sst > 0.0 ? 1.0 - sse / sst : 0.0;
    if (n > p + 1) {
        out.adjusted_r2 = adjusted_r2_value(out.full_r2, n, p);
    }

    const R2Result oob = oob_r2(forest, data);
    out.oob_r2 = oob.value;

    const OobSummary summary = oob_predictions(forest, data);
    std::vector<double> preds, resid;
    for (std::size_t i = 0; i < n; ++i) {
        if (summary.predictions[i]) {
            preds.push_back(*summary.predictions[i]);
            resid.push_back(data.y[i] - *summary.predictions[i]);
        }
    }
    if (preds.size() >= 2) {
        const double vr = population_variance(resid);
        if (vr > 0.0) out.snr = population_variance(preds) / vr;
    }
    return out;
}

CharacteristicsReport characterize(const Dataset& data, std::uint64_t seed,
                                   std::size_t n_threads) {
    CharacteristicsReport rep;
    rep.mutual_info_sum = mutual_info_sum(data);
    rep.knn_target_variance = knn_target_variance(data);
    rep.hsic_linear = hsic(data, HsicKernel::Linear);
    rep.hsic_rbf = hsic(data, HsicKernel::Rbf);
    rep.hsic_laplace = hsic(data, HsicKernel::Laplace);
    rep.high_corr_count = high_corr_count(data);

    ForestConfig config = preset_config("RF[100]");
    config.seed = seed;
    const R2Suite suite = r2_suite(data, config, n_threads);
    rep.oob_r2 = suite.oob_r2;
    rep.full_r2 = suite.full_r2;
    rep.adjusted_r2 = suite.adjusted_r2;
    rep.snr = suite.snr;
    return rep;
}

std::string to_json(const CharacteristicsReport& r) {
    std::ostringstream os;
    os.precision(12);
    auto opt = [&](const std::optional<double>& v) -> std::string {
        if (!v) return "null";
        std::ostringstream t;
        t.precision(12);
        t << *v;
        return t.str();
    };
    os << "{"
       << "\"mutual_info_sum\":" << r.mutual_info_sum << ","
       << "\"knn_target_variance\":" << r.knn_target_variance << ","
       << "\"hsic_linear\":" << r.hsic_linear << ","
       << "\"hsic_rbf\":" << r.hsic_rbf << ","
       << "\"hsic_laplace\":" << r.hsic_laplace << ","
       << "\"high_corr_count\":" << r.high_corr_count << ","
       << "\"oob_r2\":" << opt(r.oob_r2) << ","
       << "\"full_r2\":" << r.full_r2 << ","
       << "\"adjusted_r2\":" << opt(r.adjusted_r2) << ","
       << "\"snr\":" << opt(r.snr) << ","
       << "\"snr_definition\":\"artifact convention: Var(oob predictions) / Var(oob residuals)\""
       << "}";
    return os.str();
}

}  // namespace brf
