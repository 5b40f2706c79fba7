#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "brf/synthetic.hpp"

using namespace brf;

TEST_CASE("region dataset has 24 regions x 15 points") {
    RegionData rd = gen_regions(1.0, 42);
    CHECK(rd.data.n_rows == 360);
    CHECK(rd.data.n_cols == 4);
    CHECK(rd.truth.regions.size() == 24);
}

TEST_CASE("zero noise: every point matches its region level exactly") {
    RegionData rd = gen_regions(0.0, 7);
    for (std::size_t i = 0; i < rd.data.n_rows; ++i) {
        CHECK(rd.data.y[i] == doctest::Approx(rd.truth.eval(rd.data.row(i))));
    }
}

TEST_CASE("categorical coordinates are exact and numerics stay in range") {
    RegionData rd = gen_regions(2.0, 3);
    for (std::size_t i = 0; i < rd.data.n_rows; ++i) {
        const double c1 = rd.data.at(i, 0);
        const double c2 = rd.data.at(i, 1);
        CHECK((c1 == 0.0 || c1 == 1.0));
        CHECK((c2 == 0.0 || c2 == 1.0));
        CHECK(rd.data.at(i, 2) >= 0.0);
        CHECK(rd.data.at(i, 2) < 9.0);
        CHECK(rd.data.at(i, 3) >= 0.0);
        CHECK(rd.data.at(i, 3) < 10.0);
    }
}

TEST_CASE("levels are seed-determined and independent of sigma") {
    RegionData a = gen_regions(0.5, 11);
    RegionData b = gen_regions(4.0, 11);
    RegionData c = gen_regions(0.5, 12);
    for (std::size_t m = 0; m < 24; ++m) {
        CHECK(a.truth.regions[m].level == b.truth.regions[m].level);
        // geometry shared too: same feature draws
        CHECK(a.data.at(m * 15, 2) == b.data.at(m * 15, 2));
    }
    bool differs = false;
    for (std::size_t m = 0; m < 24; ++m) {
        if (a.truth.regions[m].level != c.truth.regions[m].level) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("pooled within-region variance matches sigma^2 over seeds") {
    // chi-square oracle: pooled variance of 24x15 Gaussian groups, 50 seeds
    const double sigma = 2.0;
    double pooled_sum = 0.0;
    std::size_t pooled_df = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RegionData rd = gen_regions(sigma, 1000 + seed);
        for (std::size_t m = 0; m < 24; ++m) {
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t k = 0; k < 15; ++k) {
                const double v = rd.data.y[m * 15 + k];
                sum += v;
                sumsq += v * v;
            }
            pooled_sum += sumsq - sum * sum / 15.0;
            pooled_df += 14;
        }
    }
    const double pooled_var = pooled_sum / static_cast<double>(pooled_df);
    // Var(s^2) for Gaussian data = 2 sigma^4 / df
    const double se = sigma * sigma * std::sqrt(2.0 / static_cast<double>(pooled_df));
    CHECK(std::abs(pooled_var - sigma * sigma) <= 3.0 * se);
}

TEST_CASE("pure noise generator contract") {
    NoiseSpec spec;
    spec.sigma = 0.0;
    spec.mu = 3.0;
    spec.n = 100;
    Dataset d = gen_pure_noise(spec, 5);
    CHECK(d.n_rows == 100);
    CHECK(d.n_cols == 1);
    for (double v : d.y) CHECK(v == doctest::Approx(3.0));
    for (std::size_t i = 0; i < d.n_rows; ++i) {
        CHECK(d.at(i, 0) >= 0.0);
        CHECK(d.at(i, 0) < 5.0);
    }
}

TEST_CASE("pure noise sample std within 3 SE of sigma") {
    NoiseSpec spec;  // sigma=1, n=1000
    Dataset d = gen_pure_noise(spec, 21);
    double sum = 0.0, sumsq = 0.0;
    for (double v : d.y) {
        sum += v;
        sumsq += v * v;
    }
    const double n = 1000.0;
    const double var = (sumsq - sum * sum / n) / (n - 1.0);
    // SE of the sample std for Gaussian data: sigma / sqrt(2(n-1))
    const double se = 1.0 / std::sqrt(2.0 * (n - 1.0));
    CHECK(std::abs(std::sqrt(var) - 1.0) <= 3.0 * se);
}

TEST_CASE("determinism per seed") {
    Dataset a = gen_pure_noise(NoiseSpec{}, 9);
    Dataset b = gen_pure_noise(NoiseSpec{}, 9);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
}

TEST_CASE("pure noise oracle values") {
    CHECK(pure_noise_oracle(1.0, NoisePredictor::MeanPredictor) == doctest::Approx(1.0));
    CHECK(pure_noise_oracle(0.0, NoisePredictor::MeanPredictor) == doctest::Approx(0.0));
    CHECK(pure_noise_oracle(0.0, NoisePredictor::NearestNeighbor) == doctest::Approx(0.0));
    CHECK(pure_noise_oracle(5.0, NoisePredictor::NearestNeighbor) == doctest::Approx(50.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(gen_regions(-1.0, 0), std::invalid_argument);
    NoiseSpec bad;
    bad.sigma = -0.5;
    CHECK_THROWS_AS(gen_pure_noise(bad, 0), std::invalid_argument);
    CHECK_THROWS_AS(pure_noise_oracle(-1.0, NoisePredictor::MeanPredictor),
                    std::invalid_argument);
}
