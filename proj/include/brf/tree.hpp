#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brf/dataset.hpp"
#include "brf/rng.hpp"

namespace brf {

enum class MaxFeatures { All, Log2 };

struct TreeConfig {
    std::optional<std::size_t> max_depth;  // md; absent = unlimited
    std::size_t min_samples_split = 2;     // mss
    std::size_t min_samples_leaf = 1;      // msl
    MaxFeatures max_features = MaxFeatures::All;  // mf

    void validate() const;
};

// Flat node array; children referenced by index. Leaves have feature == -1.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;      // leaf mean
    std::size_t count = 0;   // training rows (with multiplicity) at this node
    [[nodiscard]] bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
  public:
    RegressionTree() = default;
    RegressionTree(std::vector<TreeNode> nodes, std::size_t n_features)
        : nodes_(std::move(nodes)), n_features_(n_features) {}

    [[nodiscard]] double predict(std::span<const double> x) const;
    [[nodiscard]] const std::vector<TreeNode>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t n_features() const { return n_features_; }
    [[nodiscard]] std::size_t n_leaves() const;

    // Preorder node list as JSON, for debugging only.
    [[nodiscard]] std::string to_json() const;

  private:
    std::vector<TreeNode> nodes_;
    std::size_t n_features_ = 0;
};

// CART fit on the given rows (repeats carry multiplicity as extra copies).
// Splits maximize weighted-variance reduction; thresholds sit at midpoints
// between consecutive distinct values; ties break on lowest feature index,
// then lowest threshold.
RegressionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows,
                        const TreeConfig& config, SeededRng rng);

RegressionTree fit_tree(const Dataset& data, const TreeConfig& config,
                        SeededRng rng);

}  // namespace brf
