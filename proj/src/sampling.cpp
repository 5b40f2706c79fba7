#include "brf/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace brf {

std::size_t bootstrap_sample_size(std::size_t n_rows, double rate) {
    if (n_rows < 1) throw std::invalid_argument("bootstrap: n_rows must be >= 1");
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("bootstrap: rate must be positive");
    }
    double s = std::floor(rate * static_cast<double>(n_rows) + 0.5);
    return s < 1.0 ? 1 : static_cast<std::size_t>(s);
}

BootstrapSpec::BootstrapSpec(std::size_t n_rows, double rate_)
    : n(n_rows), rate(rate_), sample_size(bootstrap_sample_size(n_rows, rate_)) {}

double expected_distinct(std::size_t n_rows, double rate) {
    std::size_t s = bootstrap_sample_size(n_rows, rate);
    double nd = static_cast<double>(n_rows);
    // (1 - 1/N)^s via expm1/log1p to stay accurate for large N.
    double log_miss = static_cast<double>(s) * std::log1p(-1.0 / nd);
    return -nd * std::expm1(log_miss);
}

double expected_distinct_limit(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("expected_distinct_limit: rate must be positive");
    }
    return -std::expm1(-rate);
}

std::vector<std::size_t> bootstrap_indices(const BootstrapSpec& spec,
                                           SeededRng& rng) {
    std::vector<std::size_t> idx(spec.sample_size);
    for (auto& i : idx) {
        i = static_cast<std::size_t>(rng.next_below(spec.n));
    }
    return idx;
}

}  // namespace brf
