#include "brf/synthetic.hpp"

#include <stdexcept>

#include "brf/rng.hpp"

namespace brf {

namespace {
constexpr double kNum1Edges[] = {0.0, 3.0, 6.0, 9.0};
constexpr double kNum2Edges[] = {0.0, 5.0, 10.0};
constexpr std::size_t kPointsPerRegion = 15;
}  // namespace

bool RegionSpec::contains(std::span<const double> x) const {
    // columns: cat1, cat2, num1, num2; numeric intervals are half-open
    // [lo, hi) except the last, which closes the outer edge
    auto in = [](double v, const std::array<double, 2>& iv, double outer) {
        if (iv[1] == outer) return v >= iv[0] && v <= iv[1];
        return v >= iv[0] && v < iv[1];
    };
    return static_cast<int>(x[0]) == cat1 && static_cast<int>(x[1]) == cat2 &&
           in(x[2], num1_interval, kNum1Edges[3]) &&
           in(x[3], num2_interval, kNum2Edges[2]);
}

double RegionTruth::eval(std::span<const double> x) const {
    for (const auto& r : regions) {
        if (r.contains(x)) return r.level;
    }
    throw std::invalid_argument("region truth: point outside the feature space");
}

RegionData gen_regions(double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("gen_regions: sigma must be >= 0");

    SeededRng root(seed);
    SeededRng level_rng = root.derive(0);
    SeededRng feature_rng = root.derive(1);
    SeededRng noise_rng = root.derive(2);

    RegionData out;
    out.truth.regions.reserve(24);
    for (int c1 = 0; c1 < 2; ++c1) {
        for (int c2 = 0; c2 < 2; ++c2) {
            for (int i1 = 0; i1 < 3; ++i1) {
                for (int i2 = 0; i2 < 2; ++i2) {
                    RegionSpec r;
                    r.cat1 = c1;
                    r.cat2 = c2;
                    r.num1_interval = {kNum1Edges[i1], kNum1Edges[i1 + 1]};
                    r.num2_interval = {kNum2Edges[i2], kNum2Edges[i2 + 1]};
                    r.level = level_rng.next_uniform(0.0, 10.0);
                    out.truth.regions.push_back(r);
                }
            }
        }
    }

    const std::size_t n = out.truth.regions.size() * kPointsPerRegion;
    std::vector<double> x;
    x.reserve(n * 4);
    std::vector<double> y;
    y.reserve(n);
    for (const auto& r : out.truth.regions) {
        for (std::size_t i = 0; i < kPointsPerRegion; ++i) {
            x.push_back(static_cast<double>(r.cat1));
            x.push_back(static_cast<double>(r.cat2));
            x.push_back(feature_rng.next_uniform(r.num1_interval[0], r.num1_interval[1]));
            x.push_back(feature_rng.next_uniform(r.num2_interval[0], r.num2_interval[1]));
            y.push_back(r.level + sigma * noise_rng.next_normal());
        }
    }
    out.data = make_dataset(n, 4, std::move(x), std::move(y));
    out.data.columns[0].name = "cat1";
    out.data.columns[0].kind = ColumnKind::Binary;
    out.data.columns[1].name = "cat2";
    out.data.columns[1].kind = ColumnKind::Binary;
    out.data.columns[2].name = "num1";
    out.data.columns[3].name = "num2";
    return out;
}

void NoiseSpec::validate() const {
    if (sigma < 0.0) throw std::invalid_argument("noise spec: sigma must be >= 0");
    if (n < 1) throw std::invalid_argument("noise spec: n must be >= 1");
    if (!(x_range[0] < x_range[1])) {
        throw std::invalid_argument("noise spec: empty x range");
    }
}

Dataset gen_pure_noise(const NoiseSpec& spec, std::uint64_t seed) {
    spec.validate();
    SeededRng root(seed);
    SeededRng x_rng = root.derive(1);
    SeededRng noise_rng = root.derive(2);

    std::vector<double> x(spec.n), y(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        x[i] = x_rng.next_uniform(spec.x_range[0], spec.x_range[1]);
        y[i] = spec.mu + spec.sigma * noise_rng.next_normal();
    }
    Dataset d = make_dataset(spec.n, 1, std::move(x), std::move(y));
    d.columns[0].name = "x";
    return d;
}

double pure_noise_oracle(double sigma, NoisePredictor mode) {
    if (sigma < 0.0) throw std::invalid_argument("pure_noise_oracle: sigma must be >= 0");
    const double v = sigma * sigma;
    return mode == NoisePredictor::MeanPredictor ? v : 2.0 * v;
}

}  // namespace brf
