#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "brf/dataset.hpp"

namespace brf {

// One of the 24 cells of the piecewise-constant synthetic: a pair of
// binary coordinates plus one interval per numeric coordinate, and the
// constant response level for that cell.
struct RegionSpec {
    int cat1 = 0, cat2 = 0;
    std::array<double, 2> num1_interval{0.0, 3.0};
    std::array<double, 2> num2_interval{0.0, 5.0};
    double level = 0.0;

    [[nodiscard]] bool contains(std::span<const double> x) const;
};

struct RegionTruth {
    std::vector<RegionSpec> regions;  // 24 entries
    [[nodiscard]] double eval(std::span<const double> x) const;
};

struct RegionData {
    Dataset data;  // 360 rows x 4 cols: cat1, cat2, num1, num2
    RegionTruth truth;
};

// 24 regions x 15 points; y = c_m + N(0, sigma^2), levels c_m ~ U(0, 10).
// Levels, feature draws, and noise use separate substreams of `seed`, so
// sweeping sigma with a fixed seed keeps the geometry and scales the same
// standard-normal noise draws.
RegionData gen_regions(double sigma, std::uint64_t seed);

struct NoiseSpec {
    double sigma = 1.0;
    std::size_t n = 1000;
    std::array<double, 2> x_range{0.0, 5.0};
    double mu = 0.0;

    void validate() const;
};

// n rows, one feature: x ~ U(x_range), y ~ N(mu, sigma^2), independent.
Dataset gen_pure_noise(const NoiseSpec& spec, std::uint64_t seed);

enum class NoisePredictor { MeanPredictor, NearestNeighbor };

// Expected test MSE in the pure-noise setting: sigma^2 for the mean
// predictor, 2 sigma^2 when every prediction copies an independent
// training observation (the high-BR nearest-neighbor regime).
double pure_noise_oracle(double sigma, NoisePredictor mode);

}  // namespace brf
