#include "brf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace brf {

void TreeConfig::validate() const {
    if (min_samples_split < 2) {
        throw std::invalid_argument("tree: min_samples_split must be >= 2");
    }
    if (min_samples_leaf < 1) {
        throw std::invalid_argument("tree: min_samples_leaf must be >= 1");
    }
    if (max_depth && *max_depth < 1) {
        throw std::invalid_argument("tree: max_depth must be >= 1");
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw std::invalid_argument("tree: feature dimension mismatch");
    }
    int i = 0;
    while (!nodes_[i].is_leaf()) {
        const TreeNode& n = nodes_[i];
        i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].value;
}

std::size_t RegressionTree::n_leaves() const {
    std::size_t c = 0;
    for (const auto& n : nodes_) c += n.is_leaf() ? 1 : 0;
    return c;
}

std::string RegressionTree::to_json() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const TreeNode& n = nodes_[i];
        if (i) os << ",";
        if (n.is_leaf()) {
            os << "{\"leaf\":true,\"value\":" << n.value << ",\"count\":" << n.count << "}";
        } else {
            os << "{\"feature\":" << n.feature << ",\"threshold\":" << n.threshold
               << ",\"left\":" << n.left << ",\"right\":" << n.right << "}";
        }
    }
    os << "]";
    return os.str();
}

namespace {

struct BuildItem {
    int node;
    std::size_t lo, hi;   // range into the shared row workspace
    std::size_t depth;
};

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // sumL^2/nL + sumR^2/nR
};

std::size_t n_candidate_features(MaxFeatures mf, std::size_t p) {
    if (mf == MaxFeatures::All) return p;
    auto k = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(p))));
    return std::max<std::size_t>(1, k);
}

// k distinct feature indices, returned sorted ascending.
std::vector<std::size_t> draw_features(std::size_t p, std::size_t k, SeededRng& rng) {
    std::vector<std::size_t> all(p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (k >= p) return all;
    // partial Fisher-Yates
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.next_below(p - i));
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

RegressionTree fit_tree(const Dataset& data, std::span<const std::size_t> rows,
                        const TreeConfig& config, SeededRng rng) {
    config.validate();
    data.validate();
    if (rows.empty()) throw std::invalid_argument("tree: empty training data");
    const std::size_t p = data.n_cols;
    for (std::size_t r : rows) {
        if (!std::isfinite(data.y[r])) {
            throw std::invalid_argument("tree: non-finite target value");
        }
        for (double v : data.row(r)) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("tree: non-finite feature value");
            }
        }
    }

    std::vector<std::size_t> work(rows.begin(), rows.end());
    std::vector<TreeNode> nodes;
    std::vector<BuildItem> stack;

    nodes.emplace_back();
    stack.push_back({0, 0, work.size(), 0});

    // scratch reused across nodes
    std::vector<std::pair<double, double>> vals;  // (feature value, target)

    while (!stack.empty()) {
        BuildItem item = stack.back();
        stack.pop_back();
        const std::size_t n = item.hi - item.lo;

        double sum = 0.0;
        double ymin = data.y[work[item.lo]];
        double ymax = ymin;
        for (std::size_t i = item.lo; i < item.hi; ++i) {
            double yv = data.y[work[i]];
            sum += yv;
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
        const double mean = sum / static_cast<double>(n);

        TreeNode& node = nodes[static_cast<std::size_t>(item.node)];
        node.count = n;
        node.value = mean;

        const bool depth_capped = config.max_depth && item.depth >= *config.max_depth;
        if (depth_capped || n < config.min_samples_split ||
            n < 2 * config.min_samples_leaf || ymin == ymax) {
            continue;
        }

        SplitChoice best;
        const double base_score = sum * sum / static_cast<double>(n);
        best.score = base_score;
        bool found = false;

        auto candidates = draw_features(p, n_candidate_features(config.max_features, p), rng);
        for (std::size_t f : candidates) {
            vals.clear();
            vals.reserve(n);
            for (std::size_t i = item.lo; i < item.hi; ++i) {
                vals.emplace_back(data.at(work[i], f), data.y[work[i]]);
            }
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double sum_left = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                sum_left += vals[i].second;
                if (vals[i].first == vals[i + 1].first) continue;
                const std::size_t n_left = i + 1;
                const std::size_t n_right = n - n_left;
                if (n_left < config.min_samples_leaf || n_right < config.min_samples_leaf) {
                    continue;
                }
                const double sum_right = sum - sum_left;
                const double score =
                    sum_left * sum_left / static_cast<double>(n_left) +
                    sum_right * sum_right / static_cast<double>(n_right);
                if (score > best.score) {
                    best.score = score;
                    best.feature = static_cast<int>(f);
                    best.threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
                    found = true;
                }
            }
        }
        if (!found) continue;  // no split strictly reduces SSE

        const auto feat = static_cast<std::size_t>(best.feature);
        auto mid_it = std::partition(
            work.begin() + static_cast<std::ptrdiff_t>(item.lo),
            work.begin() + static_cast<std::ptrdiff_t>(item.hi),
            [&](std::size_t r) { return data.at(r, feat) <= best.threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - work.begin());

        const int left_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        const int right_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        TreeNode& nd = nodes[static_cast<std::size_t>(item.node)];
        nd.feature = best.feature;
        nd.threshold = best.threshold;
        nd.left = left_id;
        nd.right = right_id;

        stack.push_back({right_id, mid, item.hi, item.depth + 1});
        stack.push_back({left_id, item.lo, mid, item.depth + 1});
    }

    return RegressionTree(std::move(nodes), p);
}

RegressionTree fit_tree(const Dataset& data, const TreeConfig& config,
                        SeededRng rng) {
    std::vector<std::size_t> rows(data.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit_tree(data, rows, config, rng);
}

}  // namespace brf
