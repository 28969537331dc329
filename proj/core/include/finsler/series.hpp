#pragma once

// Univariate Taylor coefficients of elementary functions at a base point,
// and Horner composition of such a series with any truncated-jet type.
//
// A jet type J used with compose_series must support J * double, J += double
// and J * J. Every jet in this library (Jet2, TaylorPoly, FieldJet) does.

#include <cstddef>
#include <span>
#include <vector>

namespace finsler::series {

// Coefficients c_k = f^(k)(x0) / k!, k = 0..order.
std::vector<double> reciprocal(double x0, int order);
std::vector<double> exp(double x0, int order);
std::vector<double> log(double x0, int order);
std::vector<double> pow(double x0, double r, int order);
std::vector<double> sqrt(double x0, int order);
std::vector<double> atan(double x0, int order);

// Sum_k c_k delta^k for a jet `delta` with zero constant term.
template <class J>
J compose_series(std::span<const double> c, const J& delta) {
    const std::size_t k_max = c.size() - 1;
    J r = delta * 0.0;
    r += c[k_max];
    for (std::size_t k = k_max; k-- > 0;) {
        r = r * delta;
        r += c[k];
    }
    return r;
}

}  // namespace finsler::series
