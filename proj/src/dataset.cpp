#include "brf/dataset.hpp"

#include <cmath>

namespace brf {

Dataset make_dataset(std::size_t n_rows, std::size_t n_cols,
                     std::vector<double> x, std::vector<double> y) {
    Dataset d;
    d.n_rows = n_rows;
    d.n_cols = n_cols;
    d.x = std::move(x);
    d.y = std::move(y);
    d.validate();
    for (double v : d.x) {
        if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature");
    }
    for (double v : d.y) {
        if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite target");
    }
    d.columns.resize(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
        d.columns[j].name = "f" + std::to_string(j);
    }
    d.feature_mean.assign(n_cols, 0.0);
    d.feature_std.assign(n_cols, 1.0);
    return d;
}

}  // namespace brf
