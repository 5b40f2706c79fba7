// Command-line front end: expected-distinct math, synthetic data
// generation, dataset characterization, statistical tests, and the BR
// sweep harness. Exit codes: 0 success, 2 domain errors.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brf/characteristics.hpp"
#include "brf/harness.hpp"
#include "brf/preprocess.hpp"
#include "brf/sampling.hpp"
#include "brf/stats.hpp"
#include "brf/synthetic.hpp"

using json = nlohmann::json;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::invalid_argument("write failed: " + path);
}

std::string dataset_csv(const brf::Dataset& d) {
    std::ostringstream os;
    for (std::size_t j = 0; j < d.n_cols; ++j) os << d.columns[j].name << ",";
    os << "y\n";
    char buf[40];
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        for (std::size_t j = 0; j < d.n_cols; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.at(i, j));
            os << buf << ",";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", d.y[i]);
        os << buf << "\n";
    }
    return os.str();
}

std::vector<double> read_numbers(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open: " + path);
    std::vector<double> out;
    double v = 0.0;
    while (is >> v) out.push_back(v);
    if (!is.eof()) throw std::invalid_argument("non-numeric content in: " + path);
    if (out.empty()) throw std::invalid_argument("no numbers in: " + path);
    return out;
}

brf::ForestConfig config_from_json(const json& j, std::string& name) {
    if (j.is_string()) {
        name = j.get<std::string>();
        return brf::preset_config(name);
    }
    if (!j.is_object()) {
        throw std::invalid_argument("plan config entries must be names or objects");
    }
    brf::ForestConfig cfg;
    if (j.contains("base")) cfg = brf::preset_config(j.at("base").get<std::string>());
    name = j.value("name", std::string("custom"));
    if (j.contains("n_trees")) cfg.n_trees = j.at("n_trees").get<std::size_t>();
    if (j.contains("max_depth") && !j.at("max_depth").is_null()) {
        cfg.tree.max_depth = j.at("max_depth").get<std::size_t>();
    }
    if (j.contains("min_samples_split")) {
        cfg.tree.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    }
    if (j.contains("min_samples_leaf")) {
        cfg.tree.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    }
    if (j.contains("max_features")) {
        const std::string mf = j.at("max_features").get<std::string>();
        if (mf == "all") {
            cfg.tree.max_features = brf::MaxFeatures::All;
        } else if (mf == "log2") {
            cfg.tree.max_features = brf::MaxFeatures::Log2;
        } else {
            throw std::invalid_argument("max_features must be \"all\" or \"log2\"");
        }
    }
    return cfg;
}

brf::SweepPlan plan_from_json(const json& j) {
    brf::SweepPlan plan;
    if (!j.contains("configs") || !j.at("configs").is_array()) {
        throw std::invalid_argument("plan.json: \"configs\" array required");
    }
    for (const auto& entry : j.at("configs")) {
        std::string name;
        brf::ForestConfig cfg = config_from_json(entry, name);
        plan.configs.push_back({name, cfg});
    }
    if (j.contains("br_values")) {
        plan.br_values = j.at("br_values").get<std::vector<double>>();
    } else {
        plan.br_values = brf::default_br_grid();
    }
    plan.folds = j.value("folds", std::size_t{2});
    plan.repeats = j.value("repeats", std::size_t{50});
    plan.master_seed = j.value("seed", std::uint64_t{0});
    return plan;
}

int run(int argc, char** argv) {
    CLI::App app{"bootstrap-rate random forest toolkit"};
    app.require_subcommand(1);

    // expected-distinct
    auto* dist = app.add_subcommand("expected-distinct",
                                    "closed-form distinct-observation counts");
    std::size_t ed_n = 0;
    double ed_rate = 1.0;
    dist->add_option("--n", ed_n, "dataset size")->required();
    dist->add_option("--rate", ed_rate, "bootstrap rate")->required();

    // synth-regions
    auto* regions = app.add_subcommand("synth-regions",
                                       "piecewise-constant region synthetic");
    double rg_sigma = 1.0;
    std::uint64_t rg_seed = 0;
    std::string rg_out;
    regions->add_option("--sigma", rg_sigma, "noise std")->required();
    regions->add_option("--seed", rg_seed, "seed")->required();
    regions->add_option("--out", rg_out, "output csv")->required();

    // synth-noise
    auto* noise = app.add_subcommand("synth-noise", "pure-noise synthetic");
    double nz_sigma = 1.0;
    std::size_t nz_n = 1000;
    std::uint64_t nz_seed = 0;
    std::string nz_out;
    noise->add_option("--sigma", nz_sigma, "noise std")->required();
    noise->add_option("--n", nz_n, "rows")->required();
    noise->add_option("--seed", nz_seed, "seed")->required();
    noise->add_option("--out", nz_out, "output csv")->required();

    // characterize
    auto* charac = app.add_subcommand("characterize", "dataset metrics report");
    std::string ch_input, ch_target, ch_out;
    std::uint64_t ch_seed = 0;
    std::size_t ch_threads = 1;
    charac->add_option("--input", ch_input, "input csv")->required();
    charac->add_option("--target", ch_target, "target column")->required();
    charac->add_option("--out", ch_out, "output json")->required();
    charac->add_option("--seed", ch_seed, "forest seed");
    charac->add_option("--threads", ch_threads, "worker threads");

    // stats
    auto* stats = app.add_subcommand("stats", "two-sample statistics");
    std::string st_test, st_a, st_b;
    stats->add_option("--test", st_test, "t | mwu | cohend | spearman")
        ->required()
        ->check(CLI::IsMember({"t", "mwu", "cohend", "spearman"}));
    stats->add_option("--a", st_a, "first sample file")->required();
    stats->add_option("--b", st_b, "second sample file")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "BR sweep harness");
    std::string sw_input, sw_target, sw_plan, sw_out, sw_csv;
    std::size_t sw_threads = 1;
    sweep->add_option("--input", sw_input, "input csv")->required();
    sweep->add_option("--target", sw_target, "target column")->required();
    sweep->add_option("--plan", sw_plan, "plan json")->required();
    sweep->add_option("--out", sw_out, "results json")->required();
    sweep->add_option("--csv", sw_csv, "summary csv");
    sweep->add_option("--threads", sw_threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    if (dist->parsed()) {
        const double exact = brf::expected_distinct(ed_n, ed_rate);
        json out = {
            {"n", ed_n},
            {"rate", ed_rate},
            {"sample_size", brf::bootstrap_sample_size(ed_n, ed_rate)},
            {"expected_distinct", exact},
            {"expected_fraction", exact / static_cast<double>(ed_n)},
            {"limit_fraction", brf::expected_distinct_limit(ed_rate)},
        };
        std::cout << out.dump(2) << "\n";
    } else if (regions->parsed()) {
        brf::RegionData rd = brf::gen_regions(rg_sigma, rg_seed);
        write_file(rg_out, dataset_csv(rd.data));
    } else if (noise->parsed()) {
        brf::NoiseSpec spec;
        spec.sigma = nz_sigma;
        spec.n = nz_n;
        brf::Dataset d = brf::gen_pure_noise(spec, nz_seed);
        write_file(nz_out, dataset_csv(d));
    } else if (charac->parsed()) {
        brf::Dataset d = brf::preprocess(brf::load_csv(ch_input, ch_target));
        brf::CharacteristicsReport rep = brf::characterize(d, ch_seed, ch_threads);
        write_file(ch_out, brf::to_json(rep) + "\n");
    } else if (stats->parsed()) {
        const std::vector<double> a = read_numbers(st_a);
        const std::vector<double> b = read_numbers(st_b);
        json out = {{"test", st_test}};
        if (st_test == "cohend") {
            auto d = brf::cohens_d(a, b);
            out["d"] = d ? json(*d) : json(nullptr);
        } else {
            brf::TestResult r;
            if (st_test == "t") {
                r = brf::paired_t_one_sided(a, b, brf::Alternative::Less);
            } else if (st_test == "mwu") {
                r = brf::mann_whitney_u(a, b);
            } else {
                r = brf::spearman(a, b);
            }
            out["statistic"] = r.statistic;
            out["p_value"] = r.p_value;
            out["method"] = r.method;
            out["degenerate"] = r.degenerate;
        }
        std::cout << out.dump(2) << "\n";
    } else if (sweep->parsed()) {
        std::ifstream pf(sw_plan);
        if (!pf) throw std::invalid_argument("cannot open plan: " + sw_plan);
        json pj;
        try {
            pf >> pj;
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(std::string("plan.json: ") + e.what());
        }
        brf::SweepPlan plan = plan_from_json(pj);
        brf::Dataset d = brf::preprocess(brf::load_csv(sw_input, sw_target));
        brf::SweepResult res = brf::run_sweep(d, plan, sw_threads);
        write_file(sw_out, brf::to_json(res) + "\n");
        if (!sw_csv.empty()) write_file(sw_csv, brf::to_csv(res));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
