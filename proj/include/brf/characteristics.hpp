#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "brf/dataset.hpp"
#include "brf/forest.hpp"

namespace brf {

enum class HsicKernel { Linear, Rbf, Laplace };

struct CharacteristicsReport {
    double mutual_info_sum = 0.0;
    double knn_target_variance = 0.0;
    double hsic_linear = 0.0;
    double hsic_rbf = 0.0;
    double hsic_laplace = 0.0;
    std::size_t high_corr_count = 0;
    std::optional<double> oob_r2;
    double full_r2 = 0.0;
    std::optional<double> adjusted_r2;
    std::optional<double> snr;  // Var(oob preds) / Var(oob residuals); artifact convention
};

// Sum over features of plug-in mutual information (nats) between the
// feature and the target after equal-frequency discretization: 10 bins
// for continuous columns, 2 levels for binary columns, 10 bins for the
// target. Negatives are clamped to 0.
double mutual_info_sum(const Dataset& data, std::size_t n_bins = 10);

// Mean over rows of the population variance of the targets of the row's
// k Euclidean-nearest neighbors (self excluded, ties by row index).
double knn_target_variance(const Dataset& data, std::size_t k = 10);

// Biased V-statistic HSIC: (1/n^2) trace(K H L H), median-heuristic
// bandwidth for RBF and Laplace. Returns 0 for degenerate inputs.
double hsic(const Dataset& data, HsicKernel kernel);

// Number of feature columns with |Pearson r(feature, target)| > threshold;
// zero-variance columns are skipped.
std::size_t high_corr_count(const Dataset& data, double threshold = 0.9);

// 1 - (1 - r2) (n - 1) / (n - p - 1); requires n > p + 1.
double adjusted_r2_value(double full_r2, std::size_t n, std::size_t p);

struct R2Suite {
    std::optional<double> oob_r2;
    double full_r2 = 0.0;
    std::optional<double> adjusted_r2;
    std::optional<double> snr;
};

// Fits a BR=1.0 forest and reports OOB R^2, training R^2, adjusted R^2,
// and the SNR convention Var(oob predictions) / Var(oob residuals).
R2Suite r2_suite(const Dataset& data, ForestConfig config, std::size_t n_threads = 1);

CharacteristicsReport characterize(const Dataset& data, std::uint64_t seed = 0,
                                   std::size_t n_threads = 1);

std::string to_json(const CharacteristicsReport& report);

}  // namespace brf
