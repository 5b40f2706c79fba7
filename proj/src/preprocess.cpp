#include "brf/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace brf {

namespace {

constexpr const char* kMissingCategory = "__missing__";

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& cell) {
    std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// RFC-4180 field splitting, one record per row; handles quoted fields,
// doubled quotes, and CRLF / LF endings. Newlines inside quotes are kept.
std::vector<std::vector<std::string>> parse_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        records.push_back(std::move(row));
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_started || !field.empty() || !row.empty()) end_row();
                break;
            default:
                field += c;
                row_started = true;
        }
    }
    if (in_quotes) throw std::invalid_argument("csv: unterminated quoted field");
    if (row_started || !field.empty() || !row.empty()) end_row();
    return records;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string cell_key(const std::optional<std::string>& c) {
    return c ? ("v:" + *c) : std::string("na");
}

}  // namespace

RawTable parse_csv_text(const std::string& text, const std::string& target_name,
                        const TypeHints& hints) {
    auto records = parse_records(text);
    if (records.empty()) throw std::invalid_argument("csv: empty input");
    const auto& header = records.front();
    const std::size_t n_cols = header.size();
    if (records.size() < 2) throw std::invalid_argument("csv: no data rows");

    std::size_t target_idx = n_cols;
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (trim(header[j]) == target_name) target_idx = j;
    }
    if (target_idx == n_cols) {
        throw std::invalid_argument("csv: target column '" + target_name + "' not found");
    }

    const std::size_t n_rows = records.size() - 1;
    std::vector<RawColumn> cols(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
        cols[j].name = trim(header[j]);
        cols[j].cells.resize(n_rows);
    }
    for (std::size_t i = 0; i < n_rows; ++i) {
        const auto& rec = records[i + 1];
        if (rec.size() != n_cols) {
            throw std::invalid_argument("csv: ragged row " + std::to_string(i + 2));
        }
        for (std::size_t j = 0; j < n_cols; ++j) {
            std::string t = trim(rec[j]);
            if (!t.empty()) cols[j].cells[i] = std::move(t);
        }
    }

    for (auto& col : cols) {
        bool all_numeric = true;
        for (const auto& c : col.cells) {
            if (c && !parse_number(*c)) {
                all_numeric = false;
                break;
            }
        }
        if (contains(hints.categorical, col.name)) {
            col.kind = RawColumnKind::Categorical;
        } else if (contains(hints.numeric, col.name)) {
            if (!all_numeric) {
                throw std::invalid_argument("csv: column '" + col.name +
                                            "' hinted numeric but has non-numeric cells");
            }
            col.kind = RawColumnKind::Numeric;
        } else {
            col.kind = all_numeric ? RawColumnKind::Numeric : RawColumnKind::Categorical;
        }
        if (col.kind == RawColumnKind::Numeric) {
            col.numeric.resize(col.cells.size());
            for (std::size_t i = 0; i < col.cells.size(); ++i) {
                col.numeric[i] =
                    col.cells[i] ? parse_number(*col.cells[i]) : std::nullopt;
            }
        }
    }

    if (cols[target_idx].kind != RawColumnKind::Numeric) {
        throw std::invalid_argument("csv: target column must be numeric");
    }

    RawTable table;
    table.n_rows = n_rows;
    table.target = std::move(cols[target_idx]);
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (j != target_idx) table.features.push_back(std::move(cols[j]));
    }
    return table;
}

RawTable load_csv(const std::string& path, const std::string& target_name,
                  const TypeHints& hints) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str(), target_name, hints);
}

Dataset preprocess(const RawTable& raw, PreprocessLog* log) {
    PreprocessLog local_log;
    PreprocessLog& lg = log ? *log : local_log;
    lg = PreprocessLog{};

    const std::size_t n0 = raw.n_rows;

    // 1. Drop duplicate rows (exact string equality on raw cells).
    std::vector<std::size_t> keep;
    {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < n0; ++i) {
            std::string key;
            for (const auto& col : raw.features) key += cell_key(col.cells[i]) + "\x1f";
            key += cell_key(raw.target.cells[i]);
            if (seen.insert(std::move(key)).second) {
                keep.push_back(i);
            } else {
                ++lg.duplicate_rows_dropped;
            }
        }
    }

    // 3. Drop rows with missing target (before imputation; after dedup).
    {
        std::vector<std::size_t> kept;
        for (std::size_t i : keep) {
            if (raw.target.numeric[i]) {
                kept.push_back(i);
            } else {
                ++lg.missing_target_rows_dropped;
            }
        }
        keep = std::move(kept);
    }
    if (keep.empty()) throw std::invalid_argument("preprocess: all target values missing");
    if (keep.size() < 2) throw std::invalid_argument("preprocess: fewer than 2 rows survive");

    // 2. Drop single-unique-value columns (missing counts as a value).
    std::vector<const RawColumn*> cols;
    for (const auto& col : raw.features) {
        std::set<std::string> uniq;
        for (std::size_t i : keep) uniq.insert(cell_key(col.cells[i]));
        if (uniq.size() <= 1) {
            ++lg.constant_columns_dropped;
        } else {
            cols.push_back(&col);
        }
    }

    const std::size_t n = keep.size();
    std::vector<std::vector<double>> out_cols;
    std::vector<ColumnMeta> out_meta;

    for (const RawColumn* colp : cols) {
        const RawColumn& col = *colp;
        if (col.kind == RawColumnKind::Numeric) {
            // 4. Mean imputation.
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::size_t i : keep) {
                if (col.numeric[i]) {
                    sum += *col.numeric[i];
                    ++cnt;
                }
            }
            const double mean = cnt ? sum / static_cast<double>(cnt) : 0.0;
            std::vector<double> v(n);
            for (std::size_t r = 0; r < n; ++r) {
                const auto& cell = col.numeric[keep[r]];
                if (cell) {
                    v[r] = *cell;
                } else {
                    v[r] = mean;
                    ++lg.numeric_cells_imputed;
                }
            }
            out_cols.push_back(std::move(v));
            out_meta.push_back({col.name, ColumnKind::Numeric});
        } else {
            // 5. Placeholder for missing categoricals, then 6. one-hot.
            std::set<std::string> pre_missing_levels;
            bool has_missing = false;
            for (std::size_t i : keep) {
                if (col.cells[i]) {
                    pre_missing_levels.insert(*col.cells[i]);
                } else {
                    has_missing = true;
                }
            }
            std::vector<std::string> values(n);
            for (std::size_t r = 0; r < n; ++r) {
                const auto& cell = col.cells[keep[r]];
                if (cell) {
                    values[r] = *cell;
                } else {
                    values[r] = kMissingCategory;
                    ++lg.categorical_cells_imputed;
                }
            }
            std::set<std::string> levels(pre_missing_levels);
            if (has_missing) levels.insert(kMissingCategory);

            // Binary means exactly 2 levels before the placeholder; a
            // placeholder that brings the count to 3 forces full expansion.
            const bool binary = pre_missing_levels.size() == 2 && levels.size() == 2;
            auto it = levels.begin();
            if (binary) ++it;  // drop-first: skip the lexicographically first level
            for (; it != levels.end(); ++it) {
                std::vector<double> ind(n);
                for (std::size_t r = 0; r < n; ++r) {
                    ind[r] = values[r] == *it ? 1.0 : 0.0;
                }
                out_cols.push_back(std::move(ind));
                out_meta.push_back({col.name + "=" + *it, ColumnKind::Binary});
                ++lg.one_hot_columns_added;
            }
        }
    }

    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) y[r] = *raw.target.numeric[keep[r]];

    // 7. Z-score numeric features and the target (population std).
    Dataset d;
    d.n_rows = n;
    auto standardize = [&](std::vector<double>& v, double& mean_out, double& std_out) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(n);
        const double sd = std::sqrt(var);
        mean_out = mean;
        std_out = sd;
        for (double& x : v) x = (x - mean) / sd;
    };

    std::vector<std::vector<double>> final_cols;
    for (std::size_t j = 0; j < out_cols.size(); ++j) {
        double mean = 0.0, sd = 1.0;
        if (out_meta[j].kind == ColumnKind::Numeric) {
            double m0 = 0.0;
            for (double x : out_cols[j]) m0 += x;
            m0 /= static_cast<double>(n);
            double var = 0.0;
            for (double x : out_cols[j]) var += (x - m0) * (x - m0);
            if (var == 0.0) {
                // became constant after row drops; treat like step 2
                ++lg.constant_columns_dropped;
                continue;
            }
            standardize(out_cols[j], mean, sd);
        }
        final_cols.push_back(std::move(out_cols[j]));
        d.columns.push_back(out_meta[j]);
        d.feature_mean.push_back(mean);
        d.feature_std.push_back(sd);
    }

    double y_var = 0.0;
    {
        double m0 = 0.0;
        for (double x : y) m0 += x;
        m0 /= static_cast<double>(n);
        for (double x : y) y_var += (x - m0) * (x - m0);
    }
    if (y_var == 0.0) {
        d.target_mean = y.empty() ? 0.0 : y[0];
        d.target_std = 1.0;
        for (double& x : y) x -= d.target_mean;
    } else {
        standardize(y, d.target_mean, d.target_std);
    }

    d.n_cols = final_cols.size();
    d.x.resize(n * d.n_cols);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d.n_cols; ++j) {
            d.x[r * d.n_cols + j] = final_cols[j][r];
        }
    }
    d.y = std::move(y);
    d.validate();
    return d;
}

double destandardize_target(const Dataset& data, double standardized) {
    return standardized * data.target_std + data.target_mean;
}

}  // namespace brf
