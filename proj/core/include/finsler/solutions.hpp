#pragma once

// Douglas solutions of the general (alpha, beta) PDE built from (f, g, h, Phi):
//
//   phi = s (h(b^2) - int Phi(eta) / (s^2 sqrt(b^2 - s^2)) ds)
//   eta = (b^2 - s^2) / (e^F - (b^2 - s^2) G),  F = int (f + g b^2), G = int g e^F.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/gab.hpp"
#include "finsler/jet2.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {

struct SolutionSpec {
    expr::Expr f;    // in t = b^2
    expr::Expr g;    // in t = b^2
    expr::Expr h;    // in t = b^2
    expr::Expr Phi;  // in t = eta
    /// Closed antiderivatives in t. When absent the integral is computed
    /// numerically from b^2 = 0.
    std::optional<expr::Expr> F_closed;
    std::optional<expr::Expr> G_closed;
    QuadratureOptions quadrature{.abs_tol = 1e-10};
    double b0 = std::numeric_limits<double>::infinity();
    std::string name;
};

/// Builds a spec from sources in `t` (constants bound at parse time).
/// Empty F / G sources mean numeric antiderivatives.
SolutionSpec make_solution_spec(std::string_view f, std::string_view g, std::string_view h, std::string_view Phi,
                                const std::map<std::string, double>& constants = {}, std::string_view F = {},
                                std::string_view G = {});

/// Taylor coefficients of F and G at b^2 = u0, orders 0..order.
struct AntiderivativeSeries {
    double u0 = 0.0;
    std::vector<double> F;
    std::vector<double> G;
};
AntiderivativeSeries antiderivative_series(const SolutionSpec& spec, double u0, int order);

double eta(const SolutionSpec& spec, double b2, double s);
/// eta with jets in both slots (b2 and s expanded at their constant terms).
Jet2 eta(const SolutionSpec& spec, const Jet2& b2, const Jet2& s);

/// Jet in (b^2, s) of the reconstructed phi. Throws DomainError unless
/// b^2 > 0 and |s| < b, QuadratureError when the s-integral fails.
Jet2 phi_jet(const SolutionSpec& spec, double b2, double s, int order_u = 1, int order_v = 6);
double phi_from_spec(const SolutionSpec& spec, double b2, double s);

/// The reconstructed phi as a metric profile.
PhiSpec reconstructed_phi(const SolutionSpec& spec);

/// (phi - s phi_2) - Phi(eta) / sqrt(b^2 - s^2).
double psi_identity_residual(const SolutionSpec& spec, const PhiSpec& phi_closed, double b2, double s);

/// psi_1 + (1 / 2s) [1 - (f + g s^2)(b^2 - s^2)] psi_2 with psi = Phi(eta).
double characteristic_residual(const SolutionSpec& spec, double b2, double s);

namespace detail {

inline double double_factorial(int k) {
    double r = 1.0;
    for (; k > 1; k -= 2) r *= k;
    return r;
}

inline double ipow(double x, long long k) { return std::pow(x, double(k)); }

}  // namespace detail

/// s * I_n(b^2, s), I_n = int s^-2 (b^2 - s^2)^((n-1)/2) ds with zero constant;
/// (-1)!! = 0!! = 1 and empty sums vanish.
template <class T>
T s_I_n(int n, const T& b2, const T& s) {
    using detail::ipow;
    using std::atan;
    using std::sqrt;
    if (n < 1) throw InvalidArgument("I_n needs n >= 1");
    const T x = b2 - s * s;
    T sum = b2 * 0.0;
    if (n % 2 == 0) {
        const int m = n / 2;
        const double pre = detail::double_factorial(2 * m - 1) / detail::double_factorial(2 * m - 2);
        const T r = sqrt(x);
        for (int i = 1; i <= m - 1; ++i) {
            const double c = detail::double_factorial(2 * m - 2 - 2 * i) / detail::double_factorial(2 * m - 2 * i + 1);
            sum += c * ipow(b2, i - 1) * ipow(r, 2 * m - 2 * i + 1);
        }
        sum -= ipow(b2, m - 1) * (r + s * atan(s / r));
        return pre * sum;
    }
    const int m = (n - 1) / 2;
    const double pre = detail::double_factorial(2 * m) / detail::double_factorial(2 * m - 1);
    for (int i = 1; i <= m; ++i) {
        const double c = detail::double_factorial(2 * m - 2 * i - 1) / detail::double_factorial(2 * m - 2 * i + 2);
        sum += c * ipow(b2, i - 1) * ipow(x, m - i + 1);
    }
    sum -= ipow(b2, m);
    return pre * sum;
}

template <class T>
T I_n(int n, const T& b2, const T& s) {
    return s_I_n(n, b2, s) / s;
}

/// I_1 .. I_{n_max} at one point.
std::vector<double> I_n_table(int n_max, double b2, double s);

/// Regularity of the metric in terms of Phi(eta):
///   Phi / sqrt(b^2 - s^2) > 0   and   -(sqrt(b^2 - s^2) / s) d_s Phi(eta) > 0,
/// the first one only for n >= 3. Half grids s > 0 and s < 0 are tracked
/// separately; at s = 0 the second quotient is replaced by its limit.
struct SolutionRegularityReport {
    int n = 0;
    bool pass = true;
    bool ineq1_pass = true;
    bool ineq2_pass = true;
    double margin1 = std::numeric_limits<double>::infinity();
    double margin2 = std::numeric_limits<double>::infinity();
    double margin2_pos = std::numeric_limits<double>::infinity();  // s > 0 half
    double margin2_neg = std::numeric_limits<double>::infinity();  // s < 0 half
    BsPoint worst1;
    BsPoint worst2;
    std::vector<bool> node_pass;
};
SolutionRegularityReport finsler_regularity(const SolutionSpec& spec, const std::vector<BsPoint>& grid, int n);

/// max |phi_quad - phi_closed - kappa s| over the grid, kappa fitted by least
/// squares.
struct ClosedFormAgreement {
    double kappa = 0.0;
    double max_error = 0.0;
    BsPoint worst;
};
ClosedFormAgreement compare_with_closed_form(const SolutionSpec& spec, const PhiSpec& closed,
                                             const std::vector<BsPoint>& grid);

}  // namespace finsler
