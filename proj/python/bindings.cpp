#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "brf/characteristics.hpp"
#include "brf/forest.hpp"
#include "brf/harness.hpp"
#include "brf/sampling.hpp"
#include "brf/stats.hpp"
#include "brf/synthetic.hpp"

namespace py = pybind11;
using namespace brf;

namespace {

Dataset dataset_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> x,
                           py::array_t<double, py::array::c_style | py::array::forcecast> y) {
    if (x.ndim() != 2) throw std::invalid_argument("x must be 2-D");
    if (y.ndim() != 1) throw std::invalid_argument("y must be 1-D");
    const auto n = static_cast<std::size_t>(x.shape(0));
    const auto p = static_cast<std::size_t>(x.shape(1));
    if (static_cast<std::size_t>(y.shape(0)) != n) {
        throw std::invalid_argument("x and y row counts differ");
    }
    std::vector<double> xv(x.data(), x.data() + n * p);
    std::vector<double> yv(y.data(), y.data() + n);
    return make_dataset(n, p, std::move(xv), std::move(yv));
}

ForestConfig config_from_args(const std::string& preset, std::size_t n_trees,
                              std::optional<std::size_t> max_depth,
                              std::size_t min_samples_split,
                              std::size_t min_samples_leaf,
                              const std::string& max_features, double bootstrap_rate,
                              std::uint64_t seed) {
    ForestConfig cfg;
    if (!preset.empty()) {
        cfg = preset_config(preset);
    } else {
        cfg.n_trees = n_trees;
        cfg.tree.max_depth = max_depth;
        cfg.tree.min_samples_split = min_samples_split;
        cfg.tree.min_samples_leaf = min_samples_leaf;
        if (max_features == "all") {
            cfg.tree.max_features = MaxFeatures::All;
        } else if (max_features == "log2") {
            cfg.tree.max_features = MaxFeatures::Log2;
        } else {
            throw std::invalid_argument("max_features must be 'all' or 'log2'");
        }
    }
    cfg.bootstrap_rate = bootstrap_rate;
    cfg.seed = seed;
    return cfg;
}

py::dict result_to_dict(const TestResult& r) {
    py::dict d;
    d["statistic"] = r.statistic;
    d["p_value"] = r.p_value;
    d["method"] = r.method;
    d["degenerate"] = r.degenerate;
    return d;
}

Alternative alternative_from(const std::string& s) {
    if (s == "less") return Alternative::Less;
    if (s == "greater") return Alternative::Greater;
    if (s == "two-sided") return Alternative::TwoSided;
    throw std::invalid_argument("alternative must be less, greater, or two-sided");
}

// Thin handle pairing a fitted forest with its training data so OOB
// summaries stay one call away.
struct PyForest {
    RandomForest forest;
    Dataset train;
};

}  // namespace

PYBIND11_MODULE(_brforest, m) {
    m.doc() = "random forests with adjustable bootstrap rates";

    m.def("bootstrap_sample_size", &bootstrap_sample_size, py::arg("n"),
          py::arg("rate"));
    m.def("expected_distinct", &expected_distinct, py::arg("n"), py::arg("rate"));
    m.def("expected_distinct_limit", &expected_distinct_limit, py::arg("rate"));
    m.def("preset_names", &preset_names);

    py::class_<PyForest>(m, "Forest")
        .def_property_readonly(
            "n_trees", [](const PyForest& f) { return f.forest.trees().size(); })
        .def("predict",
             [](const PyForest& f,
                py::array_t<double, py::array::c_style | py::array::forcecast> x) {
                 if (x.ndim() != 2) throw std::invalid_argument("x must be 2-D");
                 const auto n = static_cast<std::size_t>(x.shape(0));
                 const auto p = static_cast<std::size_t>(x.shape(1));
                 py::array_t<double> out(static_cast<py::ssize_t>(n));
                 auto* optr = out.mutable_data();
                 for (std::size_t i = 0; i < n; ++i) {
                     optr[i] = f.forest.predict(
                         std::span<const double>(x.data() + i * p, p));
                 }
                 return out;
             },
             py::arg("x"))
        .def("oob_r2",
             [](const PyForest& f) -> std::optional<double> {
                 return oob_r2(f.forest, f.train).value;
             })
        .def("oob_coverage", [](const PyForest& f) {
            return oob_predictions(f.forest, f.train).coverage;
        });

    m.def(
        "fit",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
           py::array_t<double, py::array::c_style | py::array::forcecast> y,
           const std::string& preset, std::size_t n_trees,
           std::optional<std::size_t> max_depth, std::size_t min_samples_split,
           std::size_t min_samples_leaf, const std::string& max_features,
           double bootstrap_rate, std::uint64_t seed, std::size_t threads) {
            Dataset d = dataset_from_numpy(x, y);
            ForestConfig cfg =
                config_from_args(preset, n_trees, max_depth, min_samples_split,
                                 min_samples_leaf, max_features, bootstrap_rate, seed);
            RandomForest f = fit_forest(d, cfg, threads);
            return PyForest{std::move(f), std::move(d)};
        },
        py::arg("x"), py::arg("y"), py::kw_only(), py::arg("preset") = "",
        py::arg("n_trees") = 100, py::arg("max_depth") = std::nullopt,
        py::arg("min_samples_split") = 2, py::arg("min_samples_leaf") = 1,
        py::arg("max_features") = "all", py::arg("bootstrap_rate") = 1.0,
        py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "gen_regions",
        [](double sigma, std::uint64_t seed) {
            RegionData rd = gen_regions(sigma, seed);
            const std::size_t n = rd.data.n_rows, p = rd.data.n_cols;
            py::array_t<double> x({n, p});
            std::copy(rd.data.x.begin(), rd.data.x.end(), x.mutable_data());
            py::array_t<double> y(static_cast<py::ssize_t>(n));
            std::copy(rd.data.y.begin(), rd.data.y.end(), y.mutable_data());
            return py::make_tuple(x, y);
        },
        py::arg("sigma"), py::arg("seed"));

    m.def(
        "gen_pure_noise",
        [](double sigma, std::size_t n, std::uint64_t seed) {
            NoiseSpec spec;
            spec.sigma = sigma;
            spec.n = n;
            Dataset d = gen_pure_noise(spec, seed);
            py::array_t<double> x({n, std::size_t{1}});
            std::copy(d.x.begin(), d.x.end(), x.mutable_data());
            py::array_t<double> y(static_cast<py::ssize_t>(n));
            std::copy(d.y.begin(), d.y.end(), y.mutable_data());
            return py::make_tuple(x, y);
        },
        py::arg("sigma"), py::arg("n"), py::arg("seed"));

    m.def(
        "characterize",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
           py::array_t<double, py::array::c_style | py::array::forcecast> y,
           std::uint64_t seed, std::size_t threads) {
            CharacteristicsReport r =
                characterize(dataset_from_numpy(x, y), seed, threads);
            py::dict d;
            d["mutual_info_sum"] = r.mutual_info_sum;
            d["knn_target_variance"] = r.knn_target_variance;
            d["hsic_linear"] = r.hsic_linear;
            d["hsic_rbf"] = r.hsic_rbf;
            d["hsic_laplace"] = r.hsic_laplace;
            d["high_corr_count"] = r.high_corr_count;
            d["oob_r2"] = r.oob_r2 ? py::cast(*r.oob_r2) : py::none();
            d["full_r2"] = r.full_r2;
            d["adjusted_r2"] = r.adjusted_r2 ? py::cast(*r.adjusted_r2) : py::none();
            d["snr"] = r.snr ? py::cast(*r.snr) : py::none();
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "paired_t",
        [](const std::vector<double>& a, const std::vector<double>& b,
           const std::string& alternative) {
            return result_to_dict(paired_t_one_sided(a, b, alternative_from(alternative)));
        },
        py::arg("a"), py::arg("b"), py::arg("alternative") = "less");
    m.def(
        "mann_whitney",
        [](const std::vector<double>& a, const std::vector<double>& b,
           const std::string& alternative) {
            return result_to_dict(mann_whitney_u(a, b, alternative_from(alternative)));
        },
        py::arg("a"), py::arg("b"), py::arg("alternative") = "two-sided");
    m.def(
        "cohens_d",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            return cohens_d(std::span<const double>(a), std::span<const double>(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return result_to_dict(spearman(x, y));
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "sweep",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
           py::array_t<double, py::array::c_style | py::array::forcecast> y,
           const std::vector<std::string>& configs, const std::vector<double>& brs,
           std::size_t folds, std::size_t repeats, std::uint64_t seed,
           std::size_t threads) {
            SweepPlan plan;
            for (const auto& name : configs) {
                plan.configs.push_back({name, preset_config(name)});
            }
            plan.br_values = brs.empty() ? default_br_grid() : brs;
            plan.folds = folds;
            plan.repeats = repeats;
            plan.master_seed = seed;
            return to_json(run_sweep(dataset_from_numpy(x, y), plan, threads));
        },
        py::arg("x"), py::arg("y"), py::kw_only(), py::arg("configs"),
        py::arg("br_values") = std::vector<double>{}, py::arg("folds") = 2,
        py::arg("repeats") = 50, py::arg("seed") = 0, py::arg("threads") = 1);

    py::register_exception<std::invalid_argument>(m, "DomainError",
                                                  PyExc_ValueError);
}
