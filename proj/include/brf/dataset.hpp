#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace brf {

enum class ColumnKind { Numeric, Binary };

struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
};

// Dense numeric design matrix plus target. Row-major storage.
struct Dataset {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> x;  // n_rows * n_cols
    std::vector<double> y;  // n_rows
    std::vector<ColumnMeta> columns;

    // Standardization parameters (identity when data is unstandardized).
    std::vector<double> feature_mean, feature_std;
    double target_mean = 0.0;
    double target_std = 1.0;

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {x.data() + i * n_cols, n_cols};
    }
    double at(std::size_t i, std::size_t j) const { return x[i * n_cols + j]; }

    void validate() const {
        if (x.size() != n_rows * n_cols || y.size() != n_rows) {
            throw std::invalid_argument("dataset: inconsistent dimensions");
        }
    }
};

Dataset make_dataset(std::size_t n_rows, std::size_t n_cols,
                     std::vector<double> x, std::vector<double> y);

}  // namespace brf
