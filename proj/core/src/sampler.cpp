#include "finsler/sampler.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

PointSampler::PointSampler(const RiemannChart& chart, double b0, std::uint64_t seed, SamplerOptions options)
    : chart_(chart), b0_(b0), opt_(options), rng_(seed) {}

Sample PointSampler::next() {
    const int n = chart_.dim();
    for (int attempt = 0; attempt < opt_.max_attempts; ++attempt) {
        Sample smp;
        smp.x = Vector(n);
        smp.y = Vector(n);
        for (int i = 0; i < n; ++i) smp.x[i] = rng_.uniform(-opt_.x_box, opt_.x_box);
        for (int i = 0; i < n; ++i) smp.y[i] = rng_.uniform(-opt_.y_box, opt_.y_box);
        if (!chart_.contains(smp.x)) continue;
        const Matrix a = chart_.metric(smp.x);
        Eigen::LLT<Matrix> llt(a);
        if (llt.info() != Eigen::Success) continue;
        const Vector b = chart_.one_form(smp.x);
        const double b2 = b.dot(llt.solve(b));
        const double alpha2 = smp.y.dot(a * smp.y);
        if (!(alpha2 > 1e-12)) continue;
        const double bn = std::sqrt(b2);
        if (!(bn > opt_.b_min)) continue;
        if (std::isfinite(b0_) && bn > opt_.b_frac * b0_) continue;
        const double s = b.dot(smp.y) / std::sqrt(alpha2);
        if (std::abs(s) > opt_.s_frac * bn) continue;
        smp.b2 = b2;
        smp.s = s;
        return smp;
    }
    throw SamplerExhaustedError("no admissible point after " + std::to_string(opt_.max_attempts) + " attempts");
}

std::vector<Sample> PointSampler::draw(int count) {
    std::vector<Sample> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out.push_back(next());
    return out;
}

}  // namespace finsler
