#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached; nodes from Newton iteration on P_n.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureOptions {
    int nodes = 16;        // points per panel
    double tol = 1e-13;    // relative to the magnitude of the integral
    double abs_tol = 0.0;  // absolute floor over the whole interval
    int max_depth = 40;
    int max_panels = 4096;
};

struct Panel {
    double a;
    double b;
};

struct QuadratureResult {
    double value = 0.0;
    std::vector<Panel> panels;  // accepted panels, left to right
};

/// Adaptive bisection: a panel is accepted when the rule on it and on its
/// two halves agree to tol * |integral| (pro rata by width). Throws
/// QuadratureError when the depth or panel budget is exhausted or the
/// integrand is not finite.
QuadratureResult adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                         const QuadratureOptions& options = {});

/// Apply the panel rule to any value type (jets) on a fixed panel set.
template <class T, class Fn>
T integrate_on_panels(Fn&& f, const std::vector<Panel>& panels, int nodes, T zero) {
    const GaussLegendreRule& rule = gauss_legendre(nodes);
    T acc = zero;
    for (const Panel& p : panels) {
        const double half = 0.5 * (p.b - p.a);
        const double mid = 0.5 * (p.a + p.b);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += f(mid + half * rule.nodes[k]) * (half * rule.weights[k]);
    }
    return acc;
}


/// Panels whose halves agree to this fraction of the summed |terms| are
/// accepted regardless of tol. For jets a thousandth of it is added relative
/// to the largest coefficient.
inline constexpr double kRoundoffGuard = 1e-10;

/// Adaptive rule for a jet-valued integrand (any T with coefficients()).
/// Every coefficient has to converge relative to the integral of its
/// absolute value.
template <class T>
struct JetQuadratureResult {
    T value;
    std::vector<Panel> panels;
};

template <class T, class Fn>
JetQuadratureResult<T> adaptive_gauss_legendre_jet(Fn&& f, double a, double b, const QuadratureOptions& options,
                                                   T zero) {
    const GaussLegendreRule& rule = gauss_legendre(options.nodes);
    const std::size_t size = zero.coefficients().size();
    std::vector<double> scale(size, 0.0);
    auto apply = [&](double lo, double hi) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (lo + hi);
        T acc = zero;
        std::vector<double> mass(size, 0.0);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const T term = f(mid + half * rule.nodes[k]) * (std::abs(half) * rule.weights[k]);
            const auto c = term.coefficients();
            for (std::size_t i = 0; i < size; ++i) {
                if (!std::isfinite(c[i])) throw QuadratureError("non-finite integrand near " + std::to_string(mid));
                mass[i] += std::abs(c[i]);
            }
            acc += term;
        }
        if (hi < lo) acc *= -1.0;
        return std::pair{std::move(acc), std::move(mass)};
    };
    struct Item {
        double a, b;
        T estimate;
        int depth;
    };
    auto [whole, whole_mass] = apply(a, b);
    scale = whole_mass;
    const double width = std::abs(b - a);
    std::vector<Item> stack{{a, b, std::move(whole), 0}};
    std::vector<Item> accepted;
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        const double m = 0.5 * (it.a + it.b);
        auto [left, lm] = apply(it.a, m);
        auto [right, rm] = apply(m, it.b);
        const double frac = width > 0.0 ? std::abs(it.b - it.a) / width : 1.0;
        const auto cl = left.coefficients();
        const auto cr = right.coefficients();
        const auto ce = it.estimate.coefficients();
        double local = 0.0;
        for (std::size_t i = 0; i < size; ++i) local = std::max(local, lm[i] + rm[i]);
        const double guard = kRoundoffGuard;
        bool ok = true;
        for (std::size_t i = 0; i < size && ok; ++i)
            ok = std::abs(cl[i] + cr[i] - ce[i]) <=
                 std::max((options.tol * scale[i] + options.abs_tol) * frac, guard * (lm[i] + rm[i]) + 1e-3 * guard * local);
        if (ok) {
            accepted.push_back({it.a, m, std::move(left), it.depth + 1});
            accepted.push_back({m, it.b, std::move(right), it.depth + 1});
        } else {
            if (it.depth + 1 >= options.max_depth) throw QuadratureError("quadrature did not converge (depth limit)");
            if (static_cast<int>(accepted.size() + stack.size()) > options.max_panels)
                throw QuadratureError("quadrature did not converge (panel limit)");
            stack.push_back({m, it.b, std::move(right), it.depth + 1});
            stack.push_back({it.a, m, std::move(left), it.depth + 1});
        }
    }
    std::sort(accepted.begin(), accepted.end(), [](const Item& x, const Item& y) { return x.a < y.a; });
    JetQuadratureResult<T> out{zero, {}};
    for (const Item& it : accepted) {
        out.value += it.estimate;
        out.panels.push_back({it.a, it.b});
    }
    return out;
}

}  // namespace finsler
