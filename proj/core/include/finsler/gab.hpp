#pragma once

// General (alpha, beta)-metrics F = alpha phi(b^2, beta / alpha).

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/expr.hpp"
#include "finsler/jet2.hpp"

namespace finsler {

struct PhiSpec {
    using Fn = std::function<Jet2(const Jet2& b2, const Jet2& s)>;

    Fn phi;
    double b0 = std::numeric_limits<double>::infinity();
    std::string provenance;

    /// Jet of phi at (b2, s) with the given box orders.
    Jet2 jet(double b2, double s, int order_u = 1, int order_v = 6) const;
    double value(double b2, double s) const;
};

/// phi from an expression in the variables `b2` and `s`.
PhiSpec phi_from_expr(const expr::Expr& e, double b0 = std::numeric_limits<double>::infinity(),
                      std::string provenance = "expression");
/// Parses `src` with variables b2, s and the given constants.
PhiSpec phi_from_source(std::string_view src, const std::map<std::string, double>& constants = {},
                        double b0 = std::numeric_limits<double>::infinity());

/// A node of a (b^2, s) grid.
struct BsPoint {
    double b2 = 0.0;
    double s = 0.0;
};

/// nb values of b in [b_min, b_max], ns values of s spread symmetrically
/// over [-s_frac b, s_frac b]. An even ns keeps s = 0 off the grid.
std::vector<BsPoint> bs_grid(double b_min, double b_max, int nb, int ns, double s_frac = 0.95);

struct RegularityReport {
    int n = 0;
    bool pass = true;
    double margin1 = std::numeric_limits<double>::infinity();  // min phi - s phi_2
    double margin2 = std::numeric_limits<double>::infinity();  // min phi - s phi_2 + (b^2 - s^2) phi_22
    BsPoint worst1;
    BsPoint worst2;
    std::vector<bool> node_pass;
};

/// Finsler regularity of F on the grid: both inequalities for n >= 3, only the
/// second one for n = 2.
RegularityReport regularity(const PhiSpec& phi, int n, const std::vector<BsPoint>& grid);

struct SprayQuantities {
    double Q = 0.0, R = 0.0, Theta = 0.0, Psi = 0.0, Pi = 0.0, Omega = 0.0;
};

/// Throws RegularityError when phi, phi - s phi_2 or the second regularity
/// expression is not positive.
SprayQuantities spray_quantities(const PhiSpec& phi, double b2, double s);

/// alpha, beta, s = beta / alpha at (x, y) with a guard against alpha ~ 0.
struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
    double s = 0.0;
};
AlphaBeta alpha_beta(const ChartPoint& p, const Vector& y);

Vector spray_general(const ChartPoint& p, const std::vector<Matrix>& gamma, const BetaDerivatives& bd,
                     const PhiSpec& phi, const Vector& y);
Vector spray_general(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y);

struct ConformalQuantities {
    double E = 0.0;
    double H = 0.0, H2 = 0.0, H22 = 0.0, H222 = 0.0, H2222 = 0.0;
    double T = 0.0, T2 = 0.0, T22 = 0.0, T222 = 0.0;
};

ConformalQuantities conformal_quantities(const PhiSpec& phi, double b2, double s, int n);

/// G^i = alpha G^i + c alpha E y^i + c alpha^2 H b^i.
Vector spray_conformal(const ChartPoint& p, const std::vector<Matrix>& gamma, const PhiSpec& phi, const Vector& y,
                       double c);
Vector spray_conformal(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y, double c);

}  // namespace finsler
