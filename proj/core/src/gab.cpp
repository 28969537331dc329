#include "finsler/gab.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

Jet2 PhiSpec::jet(double b2, double s, int order_u, int order_v) const {
    if (!phi) throw InvalidArgument("empty phi");
    Jet2 r = phi(Jet2::variable_u(b2, order_u, order_v), Jet2::variable_v(s, order_u, order_v));
    if (r.order_u() != order_u || r.order_v() != order_v) r = r.truncated(order_u, order_v);
    return r;
}

double PhiSpec::value(double b2, double s) const { return jet(b2, s, 0, 0).value(); }

PhiSpec phi_from_expr(const expr::Expr& e, double b0, std::string provenance) {
    if (e.variables().size() != 2) throw InvalidArgument("phi expression needs exactly the variables b2 and s");
    PhiSpec spec;
    spec.phi = [e](const Jet2& b2, const Jet2& s) {
        const Jet2 v[2] = {b2, s};
        return e.eval<Jet2>(std::span<const Jet2>(v, 2));
    };
    spec.b0 = b0;
    spec.provenance = std::move(provenance);
    return spec;
}

PhiSpec phi_from_source(std::string_view src, const std::map<std::string, double>& constants, double b0) {
    expr::ParseOptions o;
    o.variables = {"b2", "s"};
    o.constants = constants;
    return phi_from_expr(expr::parse(src, o), b0, "expression: " + std::string(src));
}

std::vector<BsPoint> bs_grid(double b_min, double b_max, int nb, int ns, double s_frac) {
    std::vector<BsPoint> g;
    if (nb <= 0 || ns <= 0) return g;
    for (int i = 0; i < nb; ++i) {
        const double b = nb == 1 ? b_max : b_min + (b_max - b_min) * i / (nb - 1);
        for (int j = 0; j < ns; ++j) {
            const double s = ns == 1 ? 0.0 : s_frac * b * (-1.0 + 2.0 * j / (ns - 1));
            g.push_back({b * b, s});
        }
    }
    return g;
}

namespace {

struct Partials {
    double p, p1, p2, p12, p22;
};

Partials partials(const PhiSpec& phi, double b2, double s) {
    const Jet2 j = phi.jet(b2, s, 1, 2);
    return {j.partial(0, 0), j.partial(1, 0), j.partial(0, 1), j.partial(1, 1), j.partial(0, 2)};
}

}  // namespace

RegularityReport regularity(const PhiSpec& phi, int n, const std::vector<BsPoint>& grid) {
    RegularityReport rep;
    rep.n = n;
    for (const BsPoint& q : grid) {
        const Jet2 j = phi.jet(q.b2, q.s, 0, 2);
        const double m1 = j.partial(0, 0) - q.s * j.partial(0, 1);
        const double m2 = m1 + (q.b2 - q.s * q.s) * j.partial(0, 2);
        if (m1 < rep.margin1 || std::isnan(m1)) {
            rep.margin1 = m1;
            rep.worst1 = q;
        }
        if (m2 < rep.margin2 || std::isnan(m2)) {
            rep.margin2 = m2;
            rep.worst2 = q;
        }
        const bool ok = (n == 2 || m1 > 0.0) && m2 > 0.0;
        rep.node_pass.push_back(ok);
        rep.pass = rep.pass && ok;
    }
    return rep;
}

SprayQuantities spray_quantities(const PhiSpec& phi, double b2, double s) {
    const Partials d = partials(phi, b2, s);
    const double den1 = d.p - s * d.p2;
    const double den2 = den1 + (b2 - s * s) * d.p22;
    if (!(d.p > 0.0)) throw RegularityError("phi is not positive", b2, s);
    if (!(den1 > 0.0)) throw RegularityError("phi - s phi_2 is not positive", b2, s);
    if (!(den2 > 0.0)) throw RegularityError("phi - s phi_2 + (b^2 - s^2) phi_22 is not positive", b2, s);
    SprayQuantities q;
    q.Q = d.p2 / den1;
    q.R = d.p1 / den1;
    q.Theta = (den1 * d.p2 - s * d.p * d.p22) / (2.0 * d.p * den2);
    q.Psi = d.p22 / (2.0 * den2);
    q.Pi = (den1 * d.p12 - s * d.p1 * d.p22) / (den1 * den2);
    q.Omega = 2.0 * d.p1 / d.p - (s * d.p + (b2 - s * s) * d.p2) / d.p * q.Pi;
    return q;
}

AlphaBeta alpha_beta(const ChartPoint& p, const Vector& y) {
    AlphaBeta ab;
    const double a2 = y.dot(p.a * y);
    const double scale = y.norm() * std::sqrt(p.a.norm());
    if (!(a2 > 0.0) || std::sqrt(a2) <= 1e-12 * scale) throw MetricDegenerateError("alpha vanishes at y");
    ab.alpha = std::sqrt(a2);
    ab.beta = p.b.dot(y);
    ab.s = ab.beta / ab.alpha;
    return ab;
}

Vector spray_general(const ChartPoint& p, const std::vector<Matrix>& gamma, const BetaDerivatives& bd,
                     const PhiSpec& phi, const Vector& y) {
    const AlphaBeta ab = alpha_beta(p, y);
    const SprayQuantities q = spray_quantities(phi, p.b2, ab.s);
    const auto t = bd.along(p, y);
    const double a = ab.alpha;
    const double common = -2.0 * a * q.Q * t.s0 + t.r00 + 2.0 * a * a * q.R * bd.r_scalar;
    Vector g = alpha_spray(gamma, y);
    g += a * q.Q * t.s_i0;
    g += (q.Theta * common + a * q.Omega * (t.r0 + t.s0)) * y / a;
    g += (q.Psi * common + a * q.Pi * (t.r0 + t.s0)) * p.b_up;
    g -= a * a * q.R * (bd.r_up + bd.s_up);
    return g;
}

Vector spray_general(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y) {
    const ChartPoint p = evaluate_chart(chart, x);
    const auto gamma = christoffel(p);
    return spray_general(p, gamma, beta_derivatives(p, gamma), phi, y);
}

ConformalQuantities conformal_quantities(const PhiSpec& phi, double b2, double s, int n) {
    constexpr int K = 4;
    const Jet2 j = phi.jet(b2, s, 1, K + 2);
    // functions of s alone at fixed b^2
    const Jet2 p = j.truncated(0, K + 2);
    const Jet2 p1 = j.d_du();
    const Jet2 p2 = p.d_dv();
    const Jet2 p12 = p1.d_dv();
    const Jet2 p22 = p2.d_dv();
    auto cut = [](const Jet2& a) { return a.truncated(0, K); };
    const Jet2 sv = Jet2::variable_v(s, 0, K);
    const Jet2 den1 = cut(p) - sv * cut(p2);
    const Jet2 den2 = den1 + (b2 - sv * sv) * p22;
    if (!(p.value() > 0.0)) throw RegularityError("phi is not positive", b2, s);
    if (!(den2.value() > 0.0)) throw RegularityError("phi - s phi_2 + (b^2 - s^2) phi_22 is not positive", b2, s);

    const Jet2 Hj = (p22 - 2.0 * (cut(p1) - sv * cut(p12))) / (2.0 * den2);
    ConformalQuantities c;
    c.H = Hj.partial(0, 0);
    c.H2 = Hj.partial(0, 1);
    c.H22 = Hj.partial(0, 2);
    c.H222 = Hj.partial(0, 3);
    c.H2222 = Hj.partial(0, 4);

    const Jet2 s3 = Jet2::variable_v(s, 0, K - 1);
    const Jet2 Tj = -(2.0 * s3 * Hj.truncated(0, K - 1) + (b2 - s3 * s3) * Hj.d_dv()) / static_cast<double>(n + 1);
    c.T = -(2.0 * s * c.H + (b2 - s * s) * c.H2) / (n + 1);
    c.T2 = Tj.partial(0, 1);
    c.T22 = Tj.partial(0, 2);
    c.T222 = Tj.partial(0, 3);

    const double ph = p.value(), ph1 = p1.value(), ph2 = p2.value();
    c.E = (ph2 + 2.0 * s * ph1) / (2.0 * ph) - c.H * (s * ph + (b2 - s * s) * ph2) / ph;
    return c;
}

Vector spray_conformal(const ChartPoint& p, const std::vector<Matrix>& gamma, const PhiSpec& phi, const Vector& y,
                       double c) {
    const AlphaBeta ab = alpha_beta(p, y);
    const ConformalQuantities q = conformal_quantities(phi, p.b2, ab.s, p.n);
    Vector g = alpha_spray(gamma, y);
    g += c * ab.alpha * q.E * y;
    g += c * ab.alpha * ab.alpha * q.H * p.b_up;
    return g;
}

Vector spray_conformal(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y, double c) {
    const ChartPoint p = evaluate_chart(chart, x);
    return spray_conformal(p, christoffel(p), phi, y, c);
}

}  // namespace finsler
