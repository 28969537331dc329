#pragma once

#include <functional>
#include <string>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

/// Riemannian data (alpha, beta) on a coordinate chart.
///
/// Every field comes with an analytic derivative callback:
///   metric(x)            a_ij(x)
///   metric_derivative(x) [k] -> d_k a_ij
///   one_form(x)          b_i(x)
///   one_form_jacobian(x) (i, j) -> d_j b_i
class RiemannChart {
public:
    struct Callbacks {
        std::function<Matrix(const Vector&)> metric;
        std::function<std::vector<Matrix>(const Vector&)> metric_derivative;
        std::function<Vector(const Vector&)> one_form;
        std::function<Matrix(const Vector&)> one_form_jacobian;
        std::function<bool(const Vector&)> contains;  // optional, default: everywhere
    };

    RiemannChart(int n, std::string kind, Callbacks cb);

    int dim() const noexcept { return n_; }
    const std::string& kind() const noexcept { return kind_; }

    bool contains(const Vector& x) const;
    Matrix metric(const Vector& x) const { return cb_.metric(x); }
    std::vector<Matrix> metric_derivative(const Vector& x) const { return cb_.metric_derivative(x); }
    Vector one_form(const Vector& x) const { return cb_.one_form(x); }
    Matrix one_form_jacobian(const Vector& x) const { return cb_.one_form_jacobian(x); }

private:
    int n_;
    std::string kind_;
    Callbacks cb_;
};

/// a = delta, b_i = L_ij x_j + shift_i. An empty L means the identity.
RiemannChart euclidean_chart(int n, const Matrix& L = {}, const Vector& shift = {});

/// a_ij = delta_ij / q - mu x_i x_j / q^2, b_i = x_i / q^{3/2}, q = 1 + mu |x|^2.
/// Domain: q > 0.
RiemannChart mu_family_chart(int n, double mu);

/// Everything the Douglas routes need about the chart at one point.
struct ChartPoint {
    int n = 0;
    Vector x;
    Matrix a;
    Matrix a_inv;
    std::vector<Matrix> da;  // da[k] = d_k a
    Vector b;                // lower
    Vector b_up;             // b^i = a^{ij} b_j
    Matrix db;               // db(i, j) = d_j b_i
    double b2 = 0.0;
    Vector db2;              // d_k (b^2)
};

/// Throws DomainError outside the chart, MetricDegenerateError for a bad a(x).
ChartPoint evaluate_chart(const RiemannChart& chart, const Vector& x);

/// gamma[i](j, k) = Gamma^i_{jk}.
std::vector<Matrix> christoffel(const ChartPoint& p);
std::vector<Matrix> christoffel(const RiemannChart& chart, const Vector& x);

struct BetaDerivatives {
    Matrix b_cov;  // b_{i|j}
    Matrix r;
    Matrix s;
    Vector r_low;  // r_i = b^j r_ji
    Vector s_low;  // s_i = b^j s_ji
    Vector r_up;   // r^i
    Vector s_up;   // s^i
    double r_scalar = 0.0;  // r = b^i r_i

    struct Along {
        double r00 = 0.0;
        double r0 = 0.0;
        double s0 = 0.0;
        Vector s_i0;  // s^i_0 = a^{ij} s_jk y^k
    };
    Along along(const ChartPoint& p, const Vector& y) const;
};

BetaDerivatives beta_derivatives(const ChartPoint& p, const std::vector<Matrix>& gamma);
BetaDerivatives beta_derivatives(const RiemannChart& chart, const Vector& x);

struct ConformalFactor {
    double c = 0.0;
    double residual = 0.0;  // max_ij |b_{i|j} - c a_ij|
    bool accepted = false;
    bool trivial = false;   // accepted with c ~ 0
};

/// c = tr(a^{-1} b_cov) / n, accepted when residual <= tol (1 + |c|).
ConformalFactor try_conformal_factor(const ChartPoint& p, const BetaDerivatives& bd, double tol);
ConformalFactor try_conformal_factor(const RiemannChart& chart, const Vector& x, double tol = 1e-9);
/// Same, throwing NotConformalError on rejection.
ConformalFactor conformal_factor(const RiemannChart& chart, const Vector& x, double tol = 1e-9);

/// G^i = 1/2 Gamma^i_jk y^j y^k.
Vector alpha_spray(const std::vector<Matrix>& gamma, const Vector& y);
Vector alpha_spray(const RiemannChart& chart, const Vector& x, const Vector& y);

}  // namespace finsler
