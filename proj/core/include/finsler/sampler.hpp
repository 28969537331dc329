#pragma once

// Seeded sampling of admissible points (x, y) for a chart and a bound b0.
//
// The generator is std::mt19937_64 (its output sequence is fixed by the C++
// standard); doubles are formed as (word >> 11) * 2^-53, so draws reproduce
// across platforms and standard libraries.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "finsler/chart.hpp"

namespace finsler {

class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

struct SamplerOptions {
    double x_box = 0.5;    // x uniform in [-x_box, x_box]^n
    double y_box = 1.0;    // y uniform in [-y_box, y_box]^n
    double s_frac = 0.95;  // reject |s| > s_frac b
    double b_frac = 0.95;  // reject b > b_frac b0
    double b_min = 1e-3;   // reject b <= b_min
    int max_attempts = 10000;  // per sample
};

struct Sample {
    Vector x;
    Vector y;
    double b2 = 0.0;
    double s = 0.0;
};

class PointSampler {
public:
    PointSampler(const RiemannChart& chart, double b0, std::uint64_t seed, SamplerOptions options = {});

    /// Throws SamplerExhaustedError after max_attempts rejections in a row.
    Sample next();
    std::vector<Sample> draw(int count);

private:
    const RiemannChart& chart_;
    double b0_;
    SamplerOptions opt_;
    PortableRng rng_;
};

}  // namespace finsler
