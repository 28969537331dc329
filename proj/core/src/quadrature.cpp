#include "finsler/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

GaussLegendreRule build_rule(int n) {
    GaussLegendreRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0, p1 = x;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

struct Estimate {
    double value;
    double mass;  // same rule applied to |f|
};

Estimate apply(const std::function<double(double)>& f, const GaussLegendreRule& rule, double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double v = rule.weights[k] * f(mid + half * rule.nodes[k]);
        acc += v;
        mass += std::abs(v);
    }
    return {acc * half, mass * std::abs(half)};
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) throw InvalidArgument("Gauss-Legendre rule size must be in 1..512");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
    return *slot;
}

QuadratureResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                         const QuadratureOptions& options) {
    QuadratureResult res;
    if (a == b) return res;
    const GaussLegendreRule& rule = gauss_legendre(options.nodes);
    const double width = b - a;
    const double whole = apply(f, rule, a, b).value;
    if (!std::isfinite(whole)) throw QuadratureError("non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    double scale = std::abs(whole);

    struct Item {
        double a, b, estimate;
        int depth;
    };
    std::vector<Item> stack{{a, b, whole, 0}};
    std::vector<Item> accepted;
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const double m = 0.5 * (it.a + it.b);
        const Estimate le = apply(f, rule, it.a, m);
        const Estimate re = apply(f, rule, m, it.b);
        const double left = le.value, right = re.value;
        if (!std::isfinite(left) || !std::isfinite(right))
            throw QuadratureError("non-finite integrand near " + std::to_string(m));
        scale = std::max(scale, std::abs(left + right));
        const double allowed = std::max((options.tol * scale + options.abs_tol) * std::abs((it.b - it.a) / width),
                                        kRoundoffGuard * (le.mass + re.mass));
        if (std::abs(left + right - it.estimate) <= allowed) {
            accepted.push_back({it.a, m, left, it.depth + 1});
            accepted.push_back({m, it.b, right, it.depth + 1});
        } else {
            if (it.depth + 1 >= options.max_depth) throw QuadratureError("quadrature did not converge (depth limit)");
            if (static_cast<int>(accepted.size() + stack.size()) > options.max_panels)
                throw QuadratureError("quadrature did not converge (panel limit)");
            stack.push_back({m, it.b, right, it.depth + 1});
            stack.push_back({it.a, m, left, it.depth + 1});
        }
    }
    std::sort(accepted.begin(), accepted.end(), [](const Item& x, const Item& y) { return x.a < y.a; });
    for (const Item& it : accepted) {
        res.value += it.estimate;
        res.panels.push_back({it.a, it.b});
    }
    return res;
}

}  // namespace finsler
