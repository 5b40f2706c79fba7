#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brf/dataset.hpp"

namespace brf {

enum class RawColumnKind { Numeric, Categorical };

struct RawColumn {
    std::string name;
    RawColumnKind kind = RawColumnKind::Numeric;
    // Raw cells; empty optional = missing. Numeric columns additionally
    // carry parsed values aligned with cells.
    std::vector<std::optional<std::string>> cells;
    std::vector<std::optional<double>> numeric;  // only for Numeric columns
};

struct RawTable {
    std::vector<RawColumn> features;
    RawColumn target;  // must be numeric after typing
    std::size_t n_rows = 0;
};

struct TypeHints {
    std::vector<std::string> categorical;
    std::vector<std::string> numeric;
};

struct PreprocessLog {
    std::size_t duplicate_rows_dropped = 0;
    std::size_t constant_columns_dropped = 0;
    std::size_t missing_target_rows_dropped = 0;
    std::size_t numeric_cells_imputed = 0;
    std::size_t categorical_cells_imputed = 0;
    std::size_t one_hot_columns_added = 0;
};

// RFC-4180 CSV with a mandatory header row. Columns type as numeric when
// every non-missing cell parses as a real; hints override.
RawTable load_csv(const std::string& path, const std::string& target_name,
                  const TypeHints& hints = {});

RawTable parse_csv_text(const std::string& text, const std::string& target_name,
                        const TypeHints& hints = {});

// The full cleaning pipeline, applied in order: drop duplicate rows, drop
// single-value columns, drop rows with missing target, mean-impute numeric
// gaps, placeholder-impute categorical gaps, one-hot encode (drop-first for
// binary), then z-score every numeric feature and the target (population
// std, divide by n).
Dataset preprocess(const RawTable& raw, PreprocessLog* log = nullptr);

// Inverse of the target z-score, for reporting in original units.
double destandardize_target(const Dataset& data, double standardized);

}  // namespace brf
