#include "brf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "brf/rng.hpp"
#include "brf/stats.hpp"

namespace brf {

void SweepPlan::validate() const {
    if (configs.empty()) throw std::invalid_argument("sweep: no configurations");
    if (br_values.empty()) throw std::invalid_argument("sweep: no BR values");
    for (double b : br_values) {
        if (!(b > 0.0)) throw std::invalid_argument("sweep: BR values must be positive");
    }
    if (folds < 2) throw std::invalid_argument("sweep: folds must be >= 2");
    if (repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
}

const std::vector<double>& default_br_grid() {
    static const std::vector<double> grid = {0.2, 0.4, 0.6, 0.8, 1.0,
                                             1.2, 2.0, 3.0, 4.0, 5.0};
    return grid;
}

SweepPlan default_sweep_plan(std::uint64_t master_seed) {
    SweepPlan plan;
    for (const auto& name : preset_names()) {
        plan.configs.push_back({name, preset_config(name)});
    }
    plan.br_values = default_br_grid();
    plan.master_seed = master_seed;
    return plan;
}

namespace {

std::uint64_t hash_indices(const std::vector<std::size_t>& v) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t x : v) {
        h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

double mse_of(const RandomForest& forest, const Dataset& data,
              const std::vector<std::size_t>& rows) {
    double acc = 0.0;
    for (std::size_t i : rows) {
        const double e = data.y[i] - forest.predict(data.row(i));
        acc += e * e;
    }
    return acc / static_cast<double>(rows.size());
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.n_rows = rows.size();
    out.n_cols = data.n_cols;
    out.x.reserve(rows.size() * data.n_cols);
    out.y.reserve(rows.size());
    for (std::size_t i : rows) {
        const auto r = data.row(i);
        out.x.insert(out.x.end(), r.begin(), r.end());
        out.y.push_back(data.y[i]);
    }
    out.columns = data.columns;
    out.feature_mean = data.feature_mean;
    out.feature_std = data.feature_std;
    out.target_mean = data.target_mean;
    out.target_std = data.target_std;
    return out;
}

}  // namespace

SweepResult run_sweep(const Dataset& data, const SweepPlan& plan,
                      std::size_t n_threads) {
    plan.validate();
    data.validate();
    const std::size_t n = data.n_rows;
    if (n / plan.folds < 2) throw std::invalid_argument("sweep: fold would have < 2 rows");

    // Fold assignments, shared across every cell of a repeat.
    // fold_rows[repeat][fold] = row indices of that fold.
    std::vector<std::vector<std::vector<std::size_t>>> fold_rows(plan.repeats);
    std::vector<std::uint64_t> fold_hashes(plan.repeats);
    const SeededRng master(plan.master_seed);
    for (std::size_t r = 0; r < plan.repeats; ++r) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        SeededRng shuffle_rng = master.derive(r);
        for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates
            std::size_t j = static_cast<std::size_t>(shuffle_rng.next_below(i));
            std::swap(order[i - 1], order[j]);
        }
        std::vector<std::size_t> fold_of(n);
        fold_rows[r].resize(plan.folds);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t f = i * plan.folds / n;
            fold_rows[r][f].push_back(order[i]);
            fold_of[order[i]] = f;
        }
        fold_hashes[r] = hash_indices(fold_of);
    }

    const std::size_t n_configs = plan.configs.size();
    const std::size_t n_brs = plan.br_values.size();
    SweepResult result;
    result.folds = plan.folds;
    result.repeats = plan.repeats;
    result.master_seed = plan.master_seed;
    result.fold_hashes = fold_hashes;
    result.cells.resize(n_configs * n_brs);
    for (std::size_t ci = 0; ci < n_configs; ++ci) {
        for (std::size_t bi = 0; bi < n_brs; ++bi) {
            SweepCell& cell = result.cells[ci * n_brs + bi];
            cell.config_index = ci;
            cell.config_name = plan.configs[ci].name;
            cell.br = plan.br_values[bi];
            cell.mse.resize(plan.folds * plan.repeats);
        }
    }

    // Work items are (repeat, fold, config, br) fits; results land in
    // preallocated slots keyed by cell id, so scheduling order is irrelevant.
    struct Item {
        std::size_t repeat, fold, ci, bi;
    };
    std::vector<Item> items;
    items.reserve(plan.repeats * plan.folds * n_configs * n_brs);
    for (std::size_t r = 0; r < plan.repeats; ++r) {
        for (std::size_t f = 0; f < plan.folds; ++f) {
            for (std::size_t ci = 0; ci < n_configs; ++ci) {
                for (std::size_t bi = 0; bi < n_brs; ++bi) {
                    items.push_back({r, f, ci, bi});
                }
            }
        }
    }

    // Training sets per (repeat, fold): all rows outside the test fold.
    auto train_rows = [&](std::size_t r, std::size_t f) {
        std::vector<std::size_t> rows;
        rows.reserve(n - fold_rows[r][f].size());
        for (std::size_t g = 0; g < plan.folds; ++g) {
            if (g == f) continue;
            rows.insert(rows.end(), fold_rows[r][g].begin(), fold_rows[r][g].end());
        }
        return rows;
    };

    auto run_item = [&](const Item& it) {
        const std::vector<std::size_t> train = train_rows(it.repeat, it.fold);
        const Dataset train_data = subset(data, train);
        ForestConfig cfg = plan.configs[it.ci].config;
        cfg.bootstrap_rate = plan.br_values[it.bi];
        cfg.seed = master.derive(1)
                       .derive(it.repeat)
                       .derive(it.fold)
                       .derive(it.ci)
                       .derive(it.bi)
                       .next_u64();
        const RandomForest forest = fit_forest(train_data, cfg, 1);
        const double mse = mse_of(forest, data, fold_rows[it.repeat][it.fold]);
        SweepCell& cell = result.cells[it.ci * n_brs + it.bi];
        cell.mse[it.repeat * plan.folds + it.fold] = mse;
    };

    if (n_threads <= 1) {
        for (const auto& it : items) run_item(it);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < items.size();
                 i = next.fetch_add(1)) {
                run_item(items[i]);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& cell : result.cells) {
        const double dn = static_cast<double>(cell.mse.size());
        double mean = std::accumulate(cell.mse.begin(), cell.mse.end(), 0.0) / dn;
        double var = 0.0;
        for (double v : cell.mse) var += (v - mean) * (v - mean);
        cell.mean = mean;
        cell.stddev = cell.mse.size() > 1 ? std::sqrt(var / (dn - 1.0)) : 0.0;
    }
    return result;
}

BestCell select_best(const SweepResult& result) {
    if (result.cells.empty()) throw std::invalid_argument("select_best: empty result");
    const SweepCell* best = nullptr;
    bool tie = false;
    for (const auto& cell : result.cells) {
        if (!best) {
            best = &cell;
            continue;
        }
        if (cell.mean < best->mean) {
            best = &cell;
            tie = false;
        } else if (cell.mean == best->mean) {
            tie = true;
            if (cell.br < best->br) best = &cell;
        }
    }
    return {best->config_name, best->br, best->mean, tie};
}

GroupComparison compare_br_groups(const SweepResult& result) {
    bool has_low = false, has_high = false;
    for (const auto& cell : result.cells) {
        (cell.br <= 1.0 ? has_low : has_high) = true;
    }
    if (!has_low || !has_high) {
        throw std::invalid_argument("compare_br_groups: both BR groups must be present");
    }

    const SweepCell* best = nullptr;
    for (const auto& cell : result.cells) {
        if (!best || cell.mean < best->mean ||
            (cell.mean == best->mean && cell.br < best->br)) {
            best = &cell;
        }
    }

    GroupComparison out;
    out.winner_is_low_group = best->br <= 1.0;
    out.max_p_value = 0.0;
    for (const auto& cell : result.cells) {
        const bool low = cell.br <= 1.0;
        if (low == out.winner_is_low_group) continue;
        const TestResult t =
            paired_t_one_sided(best->mse, cell.mse, Alternative::Less);
        out.max_p_value = std::max(out.max_p_value, t.p_value);
    }
    for (std::size_t i = 0; i < kSignificanceThresholds.size(); ++i) {
        out.significant_at[i] = out.max_p_value < kSignificanceThresholds[i];
    }
    return out;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<const SweepCell*> cells_for_config(const SweepResult& result,
                                               const std::string& config_name) {
    std::vector<const SweepCell*> rows;
    for (const auto& cell : result.cells) {
        if (cell.config_name == config_name) rows.push_back(&cell);
    }
    if (rows.empty()) {
        throw std::invalid_argument("br curve: unknown config '" + config_name + "'");
    }
    std::sort(rows.begin(), rows.end(),
              [](const SweepCell* a, const SweepCell* b) { return a->br < b->br; });
    return rows;
}

}  // namespace

std::string emit_br_curve_csv(const SweepResult& result, const std::string& config_name) {
    std::ostringstream os;
    os << "br,mean_mse,std_mse\n";
    for (const SweepCell* cell : cells_for_config(result, config_name)) {
        os << fixed6(cell->br) << "," << fixed6(cell->mean) << ","
           << fixed6(cell->stddev) << "\n";
    }
    return os.str();
}

std::string emit_br_curve_json(const SweepResult& result, const std::string& config_name) {
    std::ostringstream os;
    os << "{\"config\":\"" << config_name << "\",\"curve\":[";
    bool first = true;
    for (const SweepCell* cell : cells_for_config(result, config_name)) {
        if (!first) os << ",";
        first = false;
        os << "{\"br\":" << fixed6(cell->br) << ",\"mean\":" << fixed6(cell->mean)
           << ",\"std\":" << fixed6(cell->stddev) << "}";
    }
    os << "]}";
    return os.str();
}

std::string to_json(const SweepResult& result) {
    std::ostringstream os;
    os << "{\"folds\":" << result.folds << ",\"repeats\":" << result.repeats
       << ",\"master_seed\":" << result.master_seed << ",\"fold_hashes\":[";
    for (std::size_t i = 0; i < result.fold_hashes.size(); ++i) {
        if (i) os << ",";
        os << result.fold_hashes[i];
    }
    os << "],\"cells\":[";
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const SweepCell& cell = result.cells[c];
        if (c) os << ",";
        os << "{\"config\":\"" << cell.config_name << "\",\"br\":" << fixed6(cell.br)
           << ",\"mean\":" << fixed6(cell.mean) << ",\"std\":" << fixed6(cell.stddev)
           << ",\"mse\":[";
        for (std::size_t i = 0; i < cell.mse.size(); ++i) {
            if (i) os << ",";
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", cell.mse[i]);
            os << buf;
        }
        os << "]}";
    }
    os << "]}";
    return os.str();
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "config,br,mean_mse,std_mse\n";
    for (const auto& cell : result.cells) {
        os << cell.config_name << "," << fixed6(cell.br) << "," << fixed6(cell.mean)
           << "," << fixed6(cell.stddev) << "\n";
    }
    return os.str();
}

}  // namespace brf
