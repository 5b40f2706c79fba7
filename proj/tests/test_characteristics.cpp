#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "brf/characteristics.hpp"
#include "brf/rng.hpp"

using namespace brf;

namespace {

Dataset columns_dataset(std::vector<std::vector<double>> cols, std::vector<double> y) {
    const std::size_t n = y.size();
    const std::size_t p = cols.size();
    std::vector<double> x(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) x[i * p + j] = cols[j][i];
    }
    return make_dataset(n, p, std::move(x), std::move(y));
}

}  // namespace

TEST_CASE("mutual information: feature identical to target gives ln(10)") {
    // 100 distinct values; 10 equal-frequency bins on each side line up on
    // the diagonal, so the plug-in estimate is exactly log(10) nats.
    std::vector<double> y(100);
    for (std::size_t i = 0; i < 100; ++i) y[i] = static_cast<double>(i) * 0.37 - 5.0;
    Dataset d = columns_dataset({y}, y);
    CHECK(mutual_info_sum(d) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("mutual information: binary split of the target gives ln(2)") {
    // The indicator of the upper half of the target occupies exactly the
    // top five target bins: I(X;Y) = log 2.
    std::vector<double> y(100), ind(100);
    for (std::size_t i = 0; i < 100; ++i) {
        y[i] = static_cast<double>(i);
        ind[i] = i < 50 ? 0.0 : 1.0;
    }
    Dataset d = columns_dataset({ind}, y);
    CHECK(mutual_info_sum(d) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("mutual information: independent feature stays near zero, sum adds up") {
    SeededRng rng(31);
    std::vector<double> y(2000), noise(2000);
    for (auto& v : y) v = rng.next_normal();
    for (auto& v : noise) v = rng.next_normal();
    Dataset ind = columns_dataset({noise}, y);
    const double mi_noise = mutual_info_sum(ind);
    CHECK(mi_noise >= 0.0);
    CHECK(mi_noise < 0.1);  // plug-in bias ~ (bins-1)^2 / (2n) ~ 0.02

    // summing over features: identical copy + noise ~= ln(10) + small bias
    Dataset both = columns_dataset({y, noise}, y);
    CHECK(both.n_cols == 2);
    CHECK(mutual_info_sum(both) ==
          doctest::Approx(std::log(10.0) + mi_noise).epsilon(1e-12));
}

TEST_CASE("mutual information: constant feature contributes nothing") {
    std::vector<double> y = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    Dataset d = columns_dataset({std::vector<double>(10, 3.0)}, y);
    CHECK(mutual_info_sum(d) == doctest::Approx(0.0));
}

TEST_CASE("knn target variance: four points on a line, k=2, by hand") {
    // neighbors and population variances:
    //   x=0 -> {1,2}: var({1,2}) = 0.25      x=1 -> {0,2}: var({0,2}) = 1
    //   x=2 -> {1,3}: var({1,3}) = 1         x=3 -> {2,1}: var({2,1}) = 0.25
    Dataset d = columns_dataset({{0, 1, 2, 3}}, {0, 1, 2, 3});
    CHECK(knn_target_variance(d, 2) == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("knn target variance: constant target gives zero") {
    Dataset d = columns_dataset({{0, 1, 2, 3, 4}}, {2, 2, 2, 2, 2});
    CHECK(knn_target_variance(d, 3) == doctest::Approx(0.0));
    CHECK_THROWS_AS(knn_target_variance(d, 5), std::invalid_argument);  // k >= n
}

TEST_CASE("hsic linear equals squared population covariance in 1-D") {
    // trace algebra: (1/n^2) tr(K H L H) with K = x x^T collapses to
    // cov_pop(x, y)^2. Here cov_pop = 7/3.
    Dataset d = columns_dataset({{1, 2, 3}}, {1, 3, 8});
    CHECK(hsic(d, HsicKernel::Linear) == doctest::Approx(49.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("hsic rbf and laplace on two points, by hand") {
    // one pairwise distance -> median bandwidth gamma = 1;
    // HSIC = (1 - k(x1,x2))^2 / 4 with k = exp(-1/2) (rbf), exp(-1) (laplace)
    Dataset d = columns_dataset({{0, 1}}, {0, 1});
    const double a_rbf = std::exp(-0.5);
    const double a_lap = std::exp(-1.0);
    CHECK(hsic(d, HsicKernel::Rbf) ==
          doctest::Approx((1 - a_rbf) * (1 - a_rbf) / 4.0).epsilon(1e-12));
    CHECK(hsic(d, HsicKernel::Laplace) ==
          doctest::Approx((1 - a_lap) * (1 - a_lap) / 4.0).epsilon(1e-12));
}

TEST_CASE("hsic rbf detects a nonlinear dependence a permutation test confirms") {
    // y = x^2: linear correlation is ~0 but HSIC-RBF should beat every
    // permuted-target replicate.
    SeededRng rng(47);
    const std::size_t n = 150;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.next_uniform(-1, 1);
        y[i] = x[i] * x[i];
    }
    Dataset d = columns_dataset({x}, y);
    const double observed = hsic(d, HsicKernel::Rbf);

    std::size_t exceed = 0;
    std::vector<double> perm = y;
    for (int r = 0; r < 50; ++r) {
        for (std::size_t i = n - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.next_below(i + 1)]);
        }
        Dataset dp = columns_dataset({x}, perm);
        if (hsic(dp, HsicKernel::Rbf) >= observed) ++exceed;
    }
    CHECK(exceed == 0);
}

TEST_CASE("hsic degenerate input returns zero") {
    Dataset d = columns_dataset({{1, 1, 1}}, {1, 2, 3});
    CHECK(hsic(d, HsicKernel::Rbf) == doctest::Approx(0.0));
}

TEST_CASE("high correlation count respects the threshold") {
    SeededRng rng(53);
    std::vector<double> y(200), copy(200), weak(200), dead(200, 1.0);
    for (std::size_t i = 0; i < 200; ++i) {
        y[i] = rng.next_normal();
        copy[i] = y[i];
        weak[i] = 0.3 * y[i] + rng.next_normal();
    }
    Dataset d = columns_dataset({copy, weak, dead}, y);
    CHECK(high_corr_count(d, 0.9) == 1);   // only the exact copy
    CHECK(high_corr_count(d, 0.05) == 2);  // the weak feature joins; dead skipped
}

TEST_CASE("adjusted r2 formula and domain") {
    // 1 - (1 - 0.8) * 9 / 7
    CHECK(adjusted_r2_value(0.8, 10, 2) == doctest::Approx(1.0 - 0.2 * 9.0 / 7.0));
    CHECK_THROWS_AS(adjusted_r2_value(0.5, 4, 3), std::invalid_argument);
}

TEST_CASE("r2 suite on a strong signal: train beats oob, snr defined") {
    SeededRng rng(61);
    const std::size_t n = 400;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.next_uniform(0, 5);
        y[i] = 2.0 * x[i] + 0.2 * rng.next_normal();
    }
    Dataset d = make_dataset(n, 1, std::move(x), std::move(y));
    ForestConfig cfg;
    cfg.n_trees = 100;
    R2Suite suite = r2_suite(d, cfg, 4);
    REQUIRE(suite.oob_r2.has_value());
    CHECK(suite.full_r2 > *suite.oob_r2);
    CHECK(*suite.oob_r2 > 0.9);
    REQUIRE(suite.adjusted_r2.has_value());
    CHECK(*suite.adjusted_r2 <= suite.full_r2);
    REQUIRE(suite.snr.has_value());
    CHECK(*suite.snr > 1.0);  // variance of oob predictions dwarfs residual variance
}

TEST_CASE("characterize report serializes with every field present") {
    SeededRng rng(71);
    const std::size_t n = 120;
    std::vector<double> x(2 * n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[2 * i] = rng.next_uniform(-1, 1);
        x[2 * i + 1] = rng.next_uniform(-1, 1);
        y[i] = x[2 * i] + 0.5 * rng.next_normal();
    }
    Dataset d = make_dataset(n, 2, std::move(x), std::move(y));
    CharacteristicsReport rep = characterize(d, 1, 2);
    CHECK(rep.mutual_info_sum >= 0.0);
    CHECK(rep.knn_target_variance > 0.0);
    CHECK(rep.hsic_rbf > 0.0);

    const std::string json = to_json(rep);
    for (const char* key :
         {"mutual_info_sum", "knn_target_variance", "hsic_linear", "hsic_rbf",
          "hsic_laplace", "high_corr_count", "oob_r2", "full_r2", "adjusted_r2",
          "snr", "snr_definition"}) {
        CAPTURE(key);
        CHECK(json.find(std::string("\"") + key + "\"") != std::string::npos);
    }
}
