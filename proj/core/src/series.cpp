#include "finsler/series.hpp"

#include <cmath>

namespace finsler::series {

std::vector<double> reciprocal(double x0, int order) {
    std::vector<double> c(order + 1);
    const double inv = 1.0 / x0;
    double p = inv;
    for (int k = 0; k <= order; ++k) {
        c[k] = (k % 2 == 0) ? p : -p;
        p *= inv;
    }
    return c;
}

std::vector<double> exp(double x0, int order) {
    std::vector<double> c(order + 1);
    c[0] = std::exp(x0);
    for (int k = 1; k <= order; ++k) c[k] = c[k - 1] / k;
    return c;
}

std::vector<double> log(double x0, int order) {
    std::vector<double> c(order + 1);
    c[0] = std::log(x0);
    const double inv = 1.0 / x0;
    double p = 1.0;
    for (int k = 1; k <= order; ++k) {
        p *= inv;
        c[k] = ((k % 2 == 1) ? p : -p) / k;
    }
    return c;
}

std::vector<double> pow(double x0, double r, int order) {
    std::vector<double> c(order + 1);
    c[0] = std::pow(x0, r);
    for (int k = 1; k <= order; ++k) c[k] = c[k - 1] * (r - (k - 1)) / (k * x0);
    return c;
}

std::vector<double> sqrt(double x0, int order) {
    std::vector<double> c(order + 1);
    c[0] = std::sqrt(x0);
    for (int k = 1; k <= order; ++k) c[k] = c[k - 1] * (0.5 - (k - 1)) / (k * x0);
    return c;
}

std::vector<double> atan(double x0, int order) {
    // d/dx atan = 1 / q(t), q(t) = (1 + x0^2) + 2 x0 t + t^2.
    std::vector<double> c(order + 1);
    c[0] = std::atan(x0);
    if (order == 0) return c;
    const double q0 = 1.0 + x0 * x0;
    const double q1 = 2.0 * x0;
    std::vector<double> inv_q(order);
    for (int k = 0; k < order; ++k) {
        double acc = (k == 0) ? 1.0 : 0.0;
        if (k >= 1) acc -= q1 * inv_q[k - 1];
        if (k >= 2) acc -= inv_q[k - 2];
        inv_q[k] = acc / q0;
    }
    for (int k = 1; k <= order; ++k) c[k] = inv_q[k - 1] / k;
    return c;
}

}  // namespace finsler::series
