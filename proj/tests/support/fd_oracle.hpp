#pragma once

// Central finite differences with one Richardson step. Test-only.

#include <cmath>
#include <functional>
#include <vector>

namespace finsler::testing {

/// d/dt g(t) at t = 0, O(h^4).
template <class G>
double fd_derivative(G&& g, double h = 1e-4) {
    auto central = [&](double step) { return (g(step) - g(-step)) / (2.0 * step); };
    const double coarse = central(h);
    const double fine = central(h / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

/// Same, returning a vector (componentwise).
template <class G>
std::vector<double> fd_derivative_vec(G&& g, double h = 1e-4) {
    auto central = [&](double step) {
        std::vector<double> a = g(step);
        const std::vector<double> b = g(-step);
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - b[i]) / (2.0 * step);
        return a;
    };
    std::vector<double> coarse = central(h);
    const std::vector<double> fine = central(h / 2.0);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return coarse;
}

/// Partial derivative of f: R^n -> R along coordinate `i` at p.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& f, std::vector<double> p, int i,
                         double h = 1e-4) {
    return fd_derivative(
        [&](double t) {
            std::vector<double> q = p;
            q[static_cast<std::size_t>(i)] += t;
            return f(q);
        },
        h);
}

/// Second partial d_i d_j f at p by nested central differences.
inline double fd_partial2(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& p,
                          int i, int j, double h = 1e-3) {
    return fd_derivative(
        [&](double t) {
            std::vector<double> q = p;
            q[static_cast<std::size_t>(i)] += t;
            return fd_partial(f, q, j, h);
        },
        h);
}

/// |a - b| <= tol * max(|b|, floor)
inline bool close_rel(double a, double b, double tol, double floor = 1.0) {
    return std::abs(a - b) <= tol * std::max(std::abs(b), floor);
}

}  // namespace finsler::testing
