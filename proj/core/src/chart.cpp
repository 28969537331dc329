#include "finsler/chart.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

RiemannChart::RiemannChart(int n, std::string kind, Callbacks cb) : n_(n), kind_(std::move(kind)), cb_(std::move(cb)) {
    if (n < 1) throw InvalidArgument("chart dimension must be positive");
    if (!cb_.metric || !cb_.metric_derivative || !cb_.one_form || !cb_.one_form_jacobian)
        throw InvalidArgument("chart needs metric, one-form and their derivatives");
}

bool RiemannChart::contains(const Vector& x) const {
    if (x.size() != n_ || !x.allFinite()) return false;
    return !cb_.contains || cb_.contains(x);
}

RiemannChart euclidean_chart(int n, const Matrix& L, const Vector& shift) {
    const Matrix lin = L.size() == 0 ? Matrix::Identity(n, n) : L;
    const Vector a = shift.size() == 0 ? Vector::Zero(n) : shift;
    if (lin.rows() != n || lin.cols() != n) throw InvalidArgument("euclidean chart: L must be n x n");
    if (a.size() != n) throw InvalidArgument("euclidean chart: shift must have n entries");
    RiemannChart::Callbacks cb;
    cb.metric = [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); };
    cb.metric_derivative = [n](const Vector&) { return std::vector<Matrix>(n, Matrix::Zero(n, n)); };
    cb.one_form = [lin, a](const Vector& x) { return Vector(lin * x + a); };
    cb.one_form_jacobian = [lin](const Vector&) { return lin; };
    return RiemannChart(n, "euclidean", std::move(cb));
}

RiemannChart mu_family_chart(int n, double mu) {
    RiemannChart::Callbacks cb;
    cb.contains = [mu](const Vector& x) { return 1.0 + mu * x.squaredNorm() > 0.0; };
    cb.metric = [n, mu](const Vector& x) {
        const double q = 1.0 + mu * x.squaredNorm();
        return Matrix(Matrix::Identity(n, n) / q - mu * x * x.transpose() / (q * q));
    };
    cb.metric_derivative = [n, mu](const Vector& x) {
        const double q = 1.0 + mu * x.squaredNorm();
        std::vector<Matrix> d(static_cast<std::size_t>(n), Matrix::Zero(n, n));
        for (int k = 0; k < n; ++k) {
            Matrix& m = d[static_cast<std::size_t>(k)];
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = -2.0 * mu * x[k] * (i == j ? 1.0 : 0.0) / (q * q);
                    v -= mu * ((i == k ? x[j] : 0.0) + (j == k ? x[i] : 0.0)) / (q * q);
                    v += 4.0 * mu * mu * x[i] * x[j] * x[k] / (q * q * q);
                    m(i, j) = v;
                }
        }
        return d;
    };
    cb.one_form = [mu](const Vector& x) {
        const double q = 1.0 + mu * x.squaredNorm();
        return Vector(x * std::pow(q, -1.5));
    };
    cb.one_form_jacobian = [n, mu](const Vector& x) {
        const double q = 1.0 + mu * x.squaredNorm();
        return Matrix(Matrix::Identity(n, n) * std::pow(q, -1.5) - 3.0 * mu * x * x.transpose() * std::pow(q, -2.5));
    };
    return RiemannChart(n, "mu_family", std::move(cb));
}

ChartPoint evaluate_chart(const RiemannChart& chart, const Vector& x) {
    if (!chart.contains(x)) throw DomainError("point outside the chart domain");
    ChartPoint p;
    p.n = chart.dim();
    p.x = x;
    p.a = chart.metric(x);
    p.a_inv = inverse_spd(p.a);
    p.da = chart.metric_derivative(x);
    p.b = chart.one_form(x);
    p.db = chart.one_form_jacobian(x);
    if (static_cast<int>(p.da.size()) != p.n || p.b.size() != p.n || p.db.rows() != p.n || p.db.cols() != p.n)
        throw InvalidArgument("chart callbacks returned inconsistent shapes");
    p.b_up = p.a_inv * p.b;
    p.b2 = p.b.dot(p.b_up);
    // d_k (b^T A^{-1} b) = 2 b^T A^{-1} d_k b - b^T A^{-1} (d_k A) A^{-1} b
    p.db2 = Vector(p.n);
    for (int k = 0; k < p.n; ++k)
        p.db2[k] = 2.0 * p.b_up.dot(p.db.col(k)) - p.b_up.dot(p.da[static_cast<std::size_t>(k)] * p.b_up);
    return p;
}

std::vector<Matrix> christoffel(const ChartPoint& p) {
    const int n = p.n;
    // first kind: L(l, j, k) = 1/2 (d_j a_lk + d_k a_jl - d_l a_jk)
    std::vector<Matrix> first(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                first[static_cast<std::size_t>(l)](j, k) =
                    0.5 * (p.da[static_cast<std::size_t>(j)](l, k) + p.da[static_cast<std::size_t>(k)](j, l) -
                           p.da[static_cast<std::size_t>(l)](j, k));
    std::vector<Matrix> gamma(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) gamma[static_cast<std::size_t>(i)] += p.a_inv(i, l) * first[static_cast<std::size_t>(l)];
    return gamma;
}

std::vector<Matrix> christoffel(const RiemannChart& chart, const Vector& x) {
    return christoffel(evaluate_chart(chart, x));
}

BetaDerivatives beta_derivatives(const ChartPoint& p, const std::vector<Matrix>& gamma) {
    const int n = p.n;
    BetaDerivatives d;
    d.b_cov = p.db;
    for (int k = 0; k < n; ++k) d.b_cov -= p.b[k] * gamma[static_cast<std::size_t>(k)];
    d.r = 0.5 * (d.b_cov + d.b_cov.transpose());
    d.s = 0.5 * (d.b_cov - d.b_cov.transpose());
    d.r_low = d.r.transpose() * p.b_up;
    d.s_low = d.s.transpose() * p.b_up;
    d.r_up = p.a_inv * d.r_low;
    d.s_up = p.a_inv * d.s_low;
    d.r_scalar = p.b_up.dot(d.r_low);
    return d;
}

BetaDerivatives beta_derivatives(const RiemannChart& chart, const Vector& x) {
    const ChartPoint p = evaluate_chart(chart, x);
    return beta_derivatives(p, christoffel(p));
}

BetaDerivatives::Along BetaDerivatives::along(const ChartPoint& p, const Vector& y) const {
    Along a;
    a.r00 = y.dot(r * y);
    a.r0 = r_low.dot(y);
    a.s0 = s_low.dot(y);
    a.s_i0 = p.a_inv * (s * y);
    return a;
}

ConformalFactor try_conformal_factor(const ChartPoint& p, const BetaDerivatives& bd, double tol) {
    ConformalFactor cf;
    cf.c = (p.a_inv.cwiseProduct(bd.b_cov.transpose())).sum() / p.n;
    cf.residual = (bd.b_cov - cf.c * p.a).cwiseAbs().maxCoeff();
    cf.accepted = cf.residual <= tol * (1.0 + std::abs(cf.c));
    cf.trivial = cf.accepted && std::abs(cf.c) <= tol;
    return cf;
}

ConformalFactor try_conformal_factor(const RiemannChart& chart, const Vector& x, double tol) {
    const ChartPoint p = evaluate_chart(chart, x);
    return try_conformal_factor(p, beta_derivatives(p, christoffel(p)), tol);
}

ConformalFactor conformal_factor(const RiemannChart& chart, const Vector& x, double tol) {
    ConformalFactor cf = try_conformal_factor(chart, x, tol);
    if (!cf.accepted) throw NotConformalError("beta is not closed-conformal", cf.residual);
    return cf;
}

Vector alpha_spray(const std::vector<Matrix>& gamma, const Vector& y) {
    Vector g(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) g[i] = 0.5 * y.dot(gamma[static_cast<std::size_t>(i)] * y);
    return g;
}

Vector alpha_spray(const RiemannChart& chart, const Vector& x, const Vector& y) {
    return alpha_spray(christoffel(chart, x), y);
}

}  // namespace finsler
