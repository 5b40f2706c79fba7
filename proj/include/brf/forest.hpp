#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brf/dataset.hpp"
#include "brf/tree.hpp"

namespace brf {

struct ForestConfig {
    std::size_t n_trees = 100;   // nt
    TreeConfig tree;
    double bootstrap_rate = 1.0; // BR
    std::uint64_t seed = 0;

    void validate() const;
};

// The 16 configurations of the benchmark grid: the RF[100] baseline and
// its 15 single-knob variants, plus RF[mfAll] as a baseline alias.
ForestConfig preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

struct OobSummary {
    std::vector<std::optional<double>> predictions;  // per training row
    std::vector<std::size_t> oob_tree_counts;        // trees excluding each row
    double coverage = 0.0;  // fraction of rows with at least one OOB tree
    bool low_coverage_warning = false;  // some covered row has < 10 OOB trees
};

struct R2Result {
    std::optional<double> value;  // absent when undefined (no coverage / zero SST)
    double coverage = 0.0;
};

class RandomForest {
  public:
    RandomForest() = default;

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> predict_all(const Dataset& data) const;
    [[nodiscard]] std::vector<double> tree_predictions(std::span<const double> x) const;

    [[nodiscard]] const std::vector<RegressionTree>& trees() const { return trees_; }
    [[nodiscard]] const std::vector<std::vector<std::size_t>>& inbag() const {
        return inbag_;
    }
    [[nodiscard]] const ForestConfig& config() const { return config_; }

    friend RandomForest fit_forest(const Dataset& data, const ForestConfig& config,
                                   std::size_t n_threads);

  private:
    std::vector<RegressionTree> trees_;
    std::vector<std::vector<std::size_t>> inbag_;  // drawn indices per tree
    ForestConfig config_;
};

// Tree t trains on bootstrap indices from rng stream (seed, t); the result
// is a pure function of (data, config), never of n_threads.
RandomForest fit_forest(const Dataset& data, const ForestConfig& config,
                        std::size_t n_threads = 1);

OobSummary oob_predictions(const RandomForest& forest, const Dataset& data);
R2Result oob_r2(const RandomForest& forest, const Dataset& data);

struct BiasVarianceReport {
    std::vector<double> bias_sq;        // per probe point
    std::vector<double> agg_variance;   // Var of the forest prediction
    std::vector<double> tree_variance;  // sigma^2_tree
    std::vector<double> tree_correlation;  // rho, mean pairwise
    std::vector<double> mse;            // empirical test MSE at the probe
    std::vector<double> decomposition_residual;  // mse - bias^2 - aggvar - sigma^2
    std::vector<double> residual_se;    // Monte-Carlo SE for the residual
};

// Refit `replicates` forests on fresh training sets and estimate the
// decomposition MSE = Bias^2 + AggVar + sigma^2 at each probe point.
// `generate` must return an independent training set for each replicate id;
// `truth` evaluates the noiseless target at a probe point.
BiasVarianceReport bias_variance_probe(
    const std::function<Dataset(std::uint64_t replicate)>& generate,
    const std::function<double(std::span<const double>)>& truth, double sigma,
    const ForestConfig& config, const std::vector<std::vector<double>>& probe_points,
    std::size_t replicates, std::uint64_t seed, std::size_t n_threads = 1);

}  // namespace brf
