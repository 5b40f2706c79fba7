#include "brf/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "brf/sampling.hpp"

namespace brf {

void ForestConfig::validate() const {
    if (n_trees < 1) throw std::invalid_argument("forest: n_trees must be >= 1");
    if (!(bootstrap_rate > 0.0)) {
        throw std::invalid_argument("forest: bootstrap_rate must be positive");
    }
    tree.validate();
}

ForestConfig preset_config(const std::string& name) {
    ForestConfig c;  // RF[100] baseline: nt=100, md=None, mss=2, msl=1, mf=All
    if (name == "RF[100]" || name == "RF[mfAll]") return c;
    if (name == "RF[200]") { c.n_trees = 200; return c; }
    if (name == "RF[500]") { c.n_trees = 500; return c; }
    if (name == "RF[md10]") { c.tree.max_depth = 10; return c; }
    if (name == "RF[md15]") { c.tree.max_depth = 15; return c; }
    if (name == "RF[md20]") { c.tree.max_depth = 20; return c; }
    if (name == "RF[md25]") { c.tree.max_depth = 25; return c; }
    if (name == "RF[mss3]") { c.tree.min_samples_split = 3; return c; }
    if (name == "RF[mss4]") { c.tree.min_samples_split = 4; return c; }
    if (name == "RF[mss6]") { c.tree.min_samples_split = 6; return c; }
    if (name == "RF[mss8]") { c.tree.min_samples_split = 8; return c; }
    if (name == "RF[msl2]") { c.tree.min_samples_leaf = 2; return c; }
    if (name == "RF[msl3]") { c.tree.min_samples_leaf = 3; return c; }
    if (name == "RF[msl4]") { c.tree.min_samples_leaf = 4; return c; }
    if (name == "RF[msl5]") { c.tree.min_samples_leaf = 5; return c; }
    if (name == "RF[mfLog2]") { c.tree.max_features = MaxFeatures::Log2; return c; }
    throw std::invalid_argument("forest: unknown preset '" + name + "'");
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "RF[100]",  "RF[200]",  "RF[500]",  "RF[md10]", "RF[md15]", "RF[md20]",
        "RF[md25]", "RF[mss3]", "RF[mss4]", "RF[mss6]", "RF[mss8]", "RF[msl2]",
        "RF[msl3]", "RF[msl4]", "RF[msl5]", "RF[mfLog2]"};
    return names;
}

double RandomForest::predict(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& t : trees_) sum += t.predict(x);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> RandomForest::predict_all(const Dataset& data) const {
    std::vector<double> out(data.n_rows);
    for (std::size_t i = 0; i < data.n_rows; ++i) out[i] = predict(data.row(i));
    return out;
}

std::vector<double> RandomForest::tree_predictions(std::span<const double> x) const {
    std::vector<double> out;
    out.reserve(trees_.size());
    for (const auto& t : trees_) out.push_back(t.predict(x));
    return out;
}

RandomForest fit_forest(const Dataset& data, const ForestConfig& config,
                        std::size_t n_threads) {
    config.validate();
    data.validate();
    if (data.n_rows == 0) throw std::invalid_argument("forest: empty dataset");

    RandomForest forest;
    forest.config_ = config;
    forest.trees_.resize(config.n_trees);
    forest.inbag_.resize(config.n_trees);

    const SeededRng root(config.seed);
    const BootstrapSpec spec(data.n_rows, config.bootstrap_rate);

    auto fit_one = [&](std::size_t t) {
        SeededRng tree_rng = root.derive(t);
        SeededRng draw_rng = tree_rng.derive(0);
        SeededRng split_rng = tree_rng.derive(1);
        forest.inbag_[t] = bootstrap_indices(spec, draw_rng);
        forest.trees_[t] = fit_tree(data, forest.inbag_[t], config.tree, split_rng);
    };

    if (n_threads <= 1 || config.n_trees == 1) {
        for (std::size_t t = 0; t < config.n_trees; ++t) fit_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t t = next.fetch_add(1); t < config.n_trees;
                 t = next.fetch_add(1)) {
                fit_one(t);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t k = std::min<std::size_t>(n_threads, config.n_trees);
        pool.reserve(k);
        for (std::size_t i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return forest;
}

OobSummary oob_predictions(const RandomForest& forest, const Dataset& data) {
    const std::size_t n = data.n_rows;
    const std::size_t n_trees = forest.trees().size();
    std::vector<std::vector<bool>> inbag_mask(n_trees, std::vector<bool>(n, false));
    for (std::size_t t = 0; t < n_trees; ++t) {
        for (std::size_t i : forest.inbag()[t]) inbag_mask[t][i] = true;
    }

    OobSummary out;
    out.predictions.resize(n);
    out.oob_tree_counts.assign(n, 0);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t t = 0; t < n_trees; ++t) {
            if (!inbag_mask[t][i]) {
                sum += forest.trees()[t].predict(data.row(i));
                ++cnt;
            }
        }
        out.oob_tree_counts[i] = cnt;
        if (cnt > 0) {
            out.predictions[i] = sum / static_cast<double>(cnt);
            ++covered;
            if (cnt < 10) out.low_coverage_warning = true;
        }
    }
    out.coverage = n ? static_cast<double>(covered) / static_cast<double>(n) : 0.0;
    return out;
}

R2Result oob_r2(const RandomForest& forest, const Dataset& data) {
    OobSummary oob = oob_predictions(forest, data);
    R2Result res;
    res.coverage = oob.coverage;

    double y_sum = 0.0;
    std::size_t n_cov = 0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        if (oob.predictions[i]) {
            y_sum += data.y[i];
            ++n_cov;
        }
    }
    if (n_cov == 0) return res;
    const double y_mean = y_sum / static_cast<double>(n_cov);

    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        if (!oob.predictions[i]) continue;
        const double e = data.y[i] - *oob.predictions[i];
        sse += e * e;
        const double d = data.y[i] - y_mean;
        sst += d * d;
    }
    if (sst == 0.0) return res;
    res.value = 1.0 - sse / sst;
    return res;
}

BiasVarianceReport bias_variance_probe(
    const std::function<Dataset(std::uint64_t)>& generate,
    const std::function<double(std::span<const double>)>& truth, double sigma,
    const ForestConfig& config, const std::vector<std::vector<double>>& probe_points,
    std::size_t replicates, std::uint64_t seed, std::size_t n_threads) {
    if (replicates < 2) {
        throw std::invalid_argument("bias_variance_probe: need >= 2 replicates");
    }
    const std::size_t n_probes = probe_points.size();
    const std::size_t n_trees = config.n_trees;

    // tree_preds[probe][replicate * n_trees + tree]
    std::vector<std::vector<double>> tree_preds(
        n_probes, std::vector<double>(replicates * n_trees));
    std::vector<std::vector<double>> forest_preds(n_probes,
                                                  std::vector<double>(replicates));

    for (std::size_t r = 0; r < replicates; ++r) {
        Dataset train = generate(r);
        ForestConfig cfg = config;
        cfg.seed = SeededRng(seed).derive(r).next_u64();
        RandomForest forest = fit_forest(train, cfg, n_threads);
        for (std::size_t q = 0; q < n_probes; ++q) {
            auto preds = forest.tree_predictions(probe_points[q]);
            double sum = 0.0;
            for (std::size_t t = 0; t < n_trees; ++t) {
                tree_preds[q][r * n_trees + t] = preds[t];
                sum += preds[t];
            }
            forest_preds[q][r] = sum / static_cast<double>(n_trees);
        }
    }

    // Independent noisy test draws for the empirical MSE.
    const std::size_t noise_draws = 200;
    SeededRng noise_rng = SeededRng(seed).derive(0x6E6F6973ULL);

    BiasVarianceReport rep;
    rep.bias_sq.resize(n_probes);
    rep.agg_variance.resize(n_probes);
    rep.tree_variance.resize(n_probes);
    rep.tree_correlation.resize(n_probes);
    rep.mse.resize(n_probes);
    rep.decomposition_residual.resize(n_probes);
    rep.residual_se.resize(n_probes);

    const auto dr = static_cast<double>(replicates);
    for (std::size_t q = 0; q < n_probes; ++q) {
        const double f_true = truth(probe_points[q]);

        double mean_f = 0.0;
        for (double v : forest_preds[q]) mean_f += v;
        mean_f /= dr;
        double agg_var = 0.0;
        for (double v : forest_preds[q]) agg_var += (v - mean_f) * (v - mean_f);
        agg_var /= (dr - 1.0);

        const double bias = mean_f - f_true;
        rep.bias_sq[q] = bias * bias;
        rep.agg_variance[q] = agg_var;

        // grand tree mean/variance and mean pairwise product within forests
        double mean_t = 0.0;
        for (double v : tree_preds[q]) mean_t += v;
        mean_t /= static_cast<double>(tree_preds[q].size());
        double var_t = 0.0;
        for (double v : tree_preds[q]) var_t += (v - mean_t) * (v - mean_t);
        var_t /= static_cast<double>(tree_preds[q].size() - 1);
        rep.tree_variance[q] = var_t;

        double cov = 0.0;
        if (n_trees >= 2) {
            for (std::size_t r = 0; r < replicates; ++r) {
                double s = 0.0, s2 = 0.0;
                for (std::size_t t = 0; t < n_trees; ++t) {
                    const double v = tree_preds[q][r * n_trees + t] - mean_t;
                    s += v;
                    s2 += v * v;
                }
                cov += (s * s - s2) /
                       static_cast<double>(n_trees * (n_trees - 1));
            }
            cov /= dr;
        }
        rep.tree_correlation[q] =
            var_t > 0.0 ? std::clamp(cov / var_t, -1.0, 1.0) : 1.0;

        // Empirical MSE against fresh noisy observations at the probe.
        double mse_sum = 0.0, mse_sumsq = 0.0;
        std::size_t mse_n = 0;
        for (std::size_t r = 0; r < replicates; ++r) {
            for (std::size_t k = 0; k < noise_draws; ++k) {
                const double y_test = f_true + sigma * noise_rng.next_normal();
                const double e = y_test - forest_preds[q][r];
                mse_sum += e * e;
                mse_sumsq += e * e * e * e;
                ++mse_n;
            }
        }
        const double mse = mse_sum / static_cast<double>(mse_n);
        rep.mse[q] = mse;
        rep.decomposition_residual[q] =
            mse - rep.bias_sq[q] - agg_var - sigma * sigma;

        const double var_sq_err =
            mse_sumsq / static_cast<double>(mse_n) - mse * mse;
        const double se_mse =
            std::sqrt(std::max(0.0, var_sq_err) / static_cast<double>(mse_n));
        const double se_mean = std::sqrt(agg_var / dr);
        const double se_var = agg_var * std::sqrt(2.0 / (dr - 1.0));
        const double se_bias = 2.0 * std::abs(bias) * se_mean + se_mean * se_mean;
        rep.residual_se[q] =
            std::sqrt(se_mse * se_mse + se_var * se_var + se_bias * se_bias);
    }
    return rep;
}

}  // namespace brf
