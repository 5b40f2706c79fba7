#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "brf/dataset.hpp"
#include "brf/forest.hpp"

namespace brf {

struct NamedConfig {
    std::string name;
    ForestConfig config;
};

struct SweepPlan {
    std::vector<NamedConfig> configs;
    std::vector<double> br_values;
    std::size_t folds = 2;
    std::size_t repeats = 50;
    std::uint64_t master_seed = 0;

    void validate() const;
};

// The benchmark default: all 16 preset configurations crossed with
// BR in {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 2.0, 3.0, 4.0, 5.0}.
SweepPlan default_sweep_plan(std::uint64_t master_seed = 0);
const std::vector<double>& default_br_grid();

struct SweepCell {
    std::size_t config_index = 0;
    std::string config_name;
    double br = 1.0;
    std::vector<double> mse;  // folds * repeats values, repeat-major
    double mean = 0.0;
    double stddev = 0.0;  // sample std (n-1)
};

struct SweepResult {
    std::vector<SweepCell> cells;  // config-major, then br order
    std::size_t folds = 0;
    std::size_t repeats = 0;
    std::uint64_t master_seed = 0;
    // Hash of each repeat's fold assignment; identical across all cells by
    // construction, recorded so pairing can be asserted externally.
    std::vector<std::uint64_t> fold_hashes;
};

// Repeated k-fold protocol with fold splits shared across every
// (config, br) cell of a repeat, so paired tests across cells are valid.
SweepResult run_sweep(const Dataset& data, const SweepPlan& plan,
                      std::size_t n_threads = 1);

struct BestCell {
    std::string config_name;
    double br = 1.0;
    double mean_mse = 0.0;
    bool tie = false;
};

// Argmin of mean MSE; ties prefer lower br, then config order.
BestCell select_best(const SweepResult& result);

constexpr std::array<double, 6> kSignificanceThresholds = {0.1,  0.05, 0.01,
                                                           1e-3, 1e-4, 1e-5};

struct GroupComparison {
    bool winner_is_low_group = true;  // best cell has br <= 1.0
    double max_p_value = 1.0;
    std::array<bool, 6> significant_at{};  // per kSignificanceThresholds entry
};

// One-sided paired t of the globally best cell's MSEs against every cell
// in the opposite BR group; reports the maximum p-value.
GroupComparison compare_br_groups(const SweepResult& result);

// (br, mean, std) rows for one configuration, sorted by br, fixed
// 6-decimal formatting.
std::string emit_br_curve_csv(const SweepResult& result, const std::string& config_name);
std::string emit_br_curve_json(const SweepResult& result, const std::string& config_name);

std::string to_json(const SweepResult& result);
std::string to_csv(const SweepResult& result);

}  // namespace brf
