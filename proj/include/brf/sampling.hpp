#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "brf/rng.hpp"

namespace brf {

// Bootstrap sample geometry: n training rows resampled with replacement
// at a given rate. Rates above 1.0 oversample the training set.
struct BootstrapSpec {
    std::size_t n = 0;
    double rate = 1.0;
    std::size_t sample_size = 0;

    BootstrapSpec(std::size_t n_rows, double rate_);
};

// Round-half-up sample size, floored at 1.
std::size_t bootstrap_sample_size(std::size_t n_rows, double rate);

// Expected number of distinct rows in one bootstrap sample:
// N * (1 - (1 - 1/N)^s) with s = round(rate * N).
double expected_distinct(std::size_t n_rows, double rate);

// Large-N limit of the distinct fraction: 1 - exp(-rate).
double expected_distinct_limit(double rate);

// sample_size i.i.d. uniform indices in [0, n), drawn with replacement.
std::vector<std::size_t> bootstrap_indices(const BootstrapSpec& spec,
                                           SeededRng& rng);

}  // namespace brf
