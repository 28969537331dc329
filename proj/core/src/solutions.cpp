#include "finsler/solutions.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/series.hpp"

namespace finsler {

namespace {

std::string location(double b2, double s) {
    return "(b2=" + std::to_string(b2) + ", s=" + std::to_string(s) + ")";
}

bool is_literal_zero(const expr::Expr& e) {
    return !e.empty() && e.root().kind == expr::NodeKind::Number && e.root().number == 0.0;
}

std::vector<double> u_coefficients(const Jet2& j) {
    std::vector<double> c(static_cast<std::size_t>(j.order_u()) + 1);
    for (int k = 0; k <= j.order_u(); ++k) c[static_cast<std::size_t>(k)] = j.coeff(k, 0);
    return c;
}

Jet2 univariate(const std::vector<double>& c) {
    Jet2 j(static_cast<int>(c.size()) - 1, 0);
    for (std::size_t k = 0; k < c.size(); ++k) j.coeff(static_cast<int>(k), 0) = c[k];
    return j;
}

double F_value(const SolutionSpec& spec, double t) {
    if (spec.F_closed) return (*spec.F_closed)(t);
    if (t == 0.0 || (is_literal_zero(spec.f) && is_literal_zero(spec.g))) return 0.0;
    return adaptive_gauss_legendre([&](double x) { return spec.f(x) + spec.g(x) * x; }, 0.0, t, spec.quadrature).value;
}

double G_value(const SolutionSpec& spec, double t) {
    if (spec.G_closed) return (*spec.G_closed)(t);
    if (t == 0.0 || is_literal_zero(spec.g)) return 0.0;
    return adaptive_gauss_legendre([&](double x) { return spec.g(x) * std::exp(F_value(spec, x)); }, 0.0, t,
                                   spec.quadrature)
        .value;
}

// eta given the antiderivative series at b2.value() and X = b^2 - s^2.
template <class J>
J eta_from(const AntiderivativeSeries& as, const J& b2, const J& x, double s_for_errors) {
    const J delta = b2 - as.u0;
    const J F = series::compose_series(std::span<const double>(as.F), delta);
    const J G = series::compose_series(std::span<const double>(as.G), delta);
    const J den = exp(F) - x * G;
    const double d0 = den.value();
    if (d0 == 0.0 || !std::isfinite(d0))
        throw DomainError("eta denominator vanishes at " + location(as.u0, s_for_errors));
    return x / den;
}

double eta_real(const AntiderivativeSeries& as, double x, double s) {
    const double den = std::exp(as.F[0]) - x * as.G[0];
    if (den == 0.0 || !std::isfinite(den)) throw DomainError("eta denominator vanishes at " + location(as.u0, s));
    return x / den;
}

void require_interior(double b2, double s) {
    if (!(b2 > 0.0) || !(s * s < b2)) throw DomainError("need b2 > 0 and |s| < b, got " + location(b2, s));
}

// E = Phi(eta) / sqrt(X) and -dE/dX at fixed b^2 = u0 + du, as jets.
struct Kernel {
    Kernel(const SolutionSpec& spec, const AntiderivativeSeries& as, int ou, int ov)
        : Phi(spec.Phi), u0(as.u0), u(Jet2::variable_u(as.u0, ou, ov)) {
        const Jet2 du = u - as.u0;
        eF = exp(series::compose_series(std::span<const double>(as.F), du));
        G = series::compose_series(std::span<const double>(as.G), du);
    }

    Jet2 den(const Jet2& x) const {
        Jet2 d = eF - x * G;
        if (d.value() == 0.0 || !std::isfinite(d.value()))
            throw DomainError("eta denominator vanishes at " + location(u0, std::sqrt(std::max(0.0, u0 - x.value()))));
        return d;
    }

    // Phi and Phi' composed with eta through the Taylor series of Phi.
    std::pair<Jet2, Jet2> phi_and_slope(const Jet2& eta) const {
        const double e0 = eta.value();
        const Jet2 delta = eta - e0;
        const int n = nilpotency_degree(delta) + 1;
        const Jet2 c = Phi(Jet2::variable_u(e0, n, 0));
        std::vector<double> v(static_cast<std::size_t>(n) + 1), dv(static_cast<std::size_t>(n));
        for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = c.coeff(k, 0);
        for (int k = 0; k < n; ++k) dv[static_cast<std::size_t>(k)] = (k + 1) * v[static_cast<std::size_t>(k) + 1];
        v.pop_back();
        return {series::compose_series(std::span<const double>(v), delta),
                series::compose_series(std::span<const double>(dv), delta)};
    }

    Jet2 E(const Jet2& x) const { return Phi(x / den(x)) / sqrt(x); }

    Jet2 E_w(const Jet2& x) const {
        const Jet2 d = den(x);
        const auto [p, dp] = phi_and_slope(x / d);
        const Jet2 rx = sqrt(x);
        return p / (2.0 * x * rx) - dp * eF / (d * d * rx);
    }

    const expr::Expr& Phi;
    double u0;
    Jet2 u;
    Jet2 eF;
    Jet2 G;
};

}  // namespace

SolutionSpec make_solution_spec(std::string_view f, std::string_view g, std::string_view h, std::string_view Phi,
                                const std::map<std::string, double>& constants, std::string_view F,
                                std::string_view G) {
    SolutionSpec spec;
    spec.f = expr::parse_t(f, constants);
    spec.g = expr::parse_t(g, constants);
    spec.h = expr::parse_t(h, constants);
    spec.Phi = expr::parse_t(Phi, constants);
    if (!F.empty()) spec.F_closed = expr::parse_t(F, constants);
    if (!G.empty()) spec.G_closed = expr::parse_t(G, constants);
    return spec;
}

AntiderivativeSeries antiderivative_series(const SolutionSpec& spec, double u0, int order) {
    if (order < 0) throw InvalidArgument("series order must be non-negative");
    AntiderivativeSeries as;
    as.u0 = u0;
    const Jet2 t = Jet2::variable_u(u0, order, 0);

    if (spec.F_closed) {
        as.F = u_coefficients((*spec.F_closed)(t));
    } else {
        as.F.assign(static_cast<std::size_t>(order) + 1, 0.0);
        as.F[0] = F_value(spec, u0);
        if (order > 0) {
            const Jet2 p = spec.f(t) + spec.g(t) * t;
            for (int k = 1; k <= order; ++k) as.F[static_cast<std::size_t>(k)] = p.coeff(k - 1, 0) / k;
        }
    }

    if (spec.G_closed) {
        as.G = u_coefficients((*spec.G_closed)(t));
    } else {
        as.G.assign(static_cast<std::size_t>(order) + 1, 0.0);
        if (!is_literal_zero(spec.g)) {
            as.G[0] = G_value(spec, u0);
            if (order > 0) {
                const Jet2 q = spec.g(t) * exp(univariate(as.F));
                for (int k = 1; k <= order; ++k) as.G[static_cast<std::size_t>(k)] = q.coeff(k - 1, 0) / k;
            }
        }
    }
    return as;
}

double eta(const SolutionSpec& spec, double b2, double s) {
    const AntiderivativeSeries as = antiderivative_series(spec, b2, 0);
    return eta_real(as, b2 - s * s, s);
}

Jet2 eta(const SolutionSpec& spec, const Jet2& b2, const Jet2& s) {
    const double u0 = b2.value();
    const AntiderivativeSeries as = antiderivative_series(spec, u0, nilpotency_degree(b2 - u0));
    return eta_from(as, b2, b2 - s * s, s.value());
}

Jet2 phi_jet(const SolutionSpec& spec, double b2, double s, int order_u, int order_v) {
    require_interior(b2, s);
    const int ou = order_u, ov = order_v;
    const AntiderivativeSeries as = antiderivative_series(spec, b2, ou);

    // With E(u, w) = Phi(eta) / sqrt(u - w) and X = u - w,
    //   phi   = s h + E(u, 0) - s^2 int_0^1 2 (1 - r) E_w(u, s^2 r^2) dr,
    //   phi_s = h - 2 s int_0^1 E_w(u, s^2 r^2) dr,
    //   phi_ss = -2 E_w(u, s^2).
    const Kernel base(spec, as, ou, 0);
    const double s2 = s * s;
    auto weighted = [&](double r) { return base.E_w(base.u - s2 * r * r) * (2.0 * (1.0 - r)); };
    auto plain = [&](double r) { return base.E_w(base.u - s2 * r * r); };
    const Jet2 zero(ou, 0);
    const Jet2 h = spec.h(base.u);
    const Jet2 phi0 = s * h + base.E(base.u) -
                      s2 * adaptive_gauss_legendre_jet(weighted, 0.0, 1.0, spec.quadrature, zero).value;

    Jet2 phi(ou, ov);
    for (int a = 0; a <= ou; ++a) phi.coeff(a, 0) = phi0.coeff(a, 0);
    if (ov >= 1) {
        const Jet2 phi1 = h - 2.0 * s * adaptive_gauss_legendre_jet(plain, 0.0, 1.0, spec.quadrature, zero).value;
        for (int a = 0; a <= ou; ++a) phi.coeff(a, 1) = phi1.coeff(a, 0);
    }
    if (ov >= 2) {
        const Kernel full(spec, as, ou, ov - 2);
        const Jet2 sv = Jet2::variable_v(s, ou, ov - 2);
        const Jet2 q = full.E_w(full.u - sv * sv) * -2.0;
        for (int a = 0; a <= ou; ++a)
            for (int k = 0; k <= ov - 2; ++k) phi.coeff(a, k + 2) = q.coeff(a, k) / ((k + 1.0) * (k + 2.0));
    }
    if (!phi.all_finite()) throw DomainError("reconstructed phi is not finite at " + location(b2, s));
    return phi;
}

double phi_from_spec(const SolutionSpec& spec, double b2, double s) { return phi_jet(spec, b2, s, 0, 0).value(); }

PhiSpec reconstructed_phi(const SolutionSpec& spec) {
    PhiSpec p;
    p.phi = [spec](const Jet2& b2, const Jet2& s) {
        const double u0 = b2.value(), s0 = s.value();
        const int ou = b2.order_u(), ov = b2.order_v();
        if (b2 == Jet2::variable_u(u0, ou, ov) && s == Jet2::variable_v(s0, ou, ov)) return phi_jet(spec, u0, s0, ou, ov);
        const Jet2 du = b2 - u0, dv = s - s0;
        const int ku = nilpotency_degree(du), kv = nilpotency_degree(dv);
        return compose_bivariate(phi_jet(spec, u0, s0, ku, kv), du, dv, ku, kv);
    };
    p.b0 = spec.b0;
    p.provenance = spec.name.empty() ? "solution spec" : "solution spec: " + spec.name;
    return p;
}

double psi_identity_residual(const SolutionSpec& spec, const PhiSpec& phi_closed, double b2, double s) {
    require_interior(b2, s);
    const Jet2 j = phi_closed.jet(b2, s, 0, 1);
    const double lhs = j.partial(0, 0) - s * j.partial(0, 1);
    const double rhs = spec.Phi(eta(spec, b2, s)) / std::sqrt(b2 - s * s);
    return lhs - rhs;
}

double characteristic_residual(const SolutionSpec& spec, double b2, double s) {
    require_interior(b2, s);
    if (s == 0.0) throw DomainError("characteristic residual needs s != 0");
    const Jet2 psi = spec.Phi(eta(spec, Jet2::variable_u(b2, 1, 1), Jet2::variable_v(s, 1, 1)));
    const double f = spec.f(b2), g = spec.g(b2);
    return psi.partial(1, 0) + (1.0 - (f + g * s * s) * (b2 - s * s)) / (2.0 * s) * psi.partial(0, 1);
}

std::vector<double> I_n_table(int n_max, double b2, double s) {
    std::vector<double> r;
    for (int n = 1; n <= n_max; ++n) r.push_back(I_n(n, b2, s));
    return r;
}

SolutionRegularityReport finsler_regularity(const SolutionSpec& spec, const std::vector<BsPoint>& grid, int n) {
    SolutionRegularityReport rep;
    rep.n = n;
    for (const BsPoint& q : grid) {
        require_interior(q.b2, q.s);
        const Jet2 psi = spec.Phi(eta(spec, Jet2::variable_u(q.b2, 0, 2), Jet2::variable_v(q.s, 0, 2)));
        const double r = std::sqrt(q.b2 - q.s * q.s);
        const double m1 = psi.value() / r;
        // at s = 0 the quotient is replaced by its limit
        const double m2 = q.s != 0.0 ? -(r / q.s) * psi.partial(0, 1) : -r * psi.partial(0, 2);
        if (m1 < rep.margin1 || std::isnan(m1)) {
            rep.margin1 = m1;
            rep.worst1 = q;
        }
        if (m2 < rep.margin2 || std::isnan(m2)) {
            rep.margin2 = m2;
            rep.worst2 = q;
        }
        if (q.s > 0.0) rep.margin2_pos = std::min(rep.margin2_pos, m2);
        if (q.s < 0.0) rep.margin2_neg = std::min(rep.margin2_neg, m2);
        const bool ok1 = m1 > 0.0, ok2 = m2 > 0.0;
        rep.ineq1_pass = rep.ineq1_pass && ok1;
        rep.ineq2_pass = rep.ineq2_pass && ok2;
        const bool ok = (n == 2 || ok1) && ok2;
        rep.node_pass.push_back(ok);
        rep.pass = rep.pass && ok;
    }
    return rep;
}

ClosedFormAgreement compare_with_closed_form(const SolutionSpec& spec, const PhiSpec& closed,
                                             const std::vector<BsPoint>& grid) {
    ClosedFormAgreement out;
    std::vector<double> d(grid.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        d[i] = phi_from_spec(spec, grid[i].b2, grid[i].s) - closed.value(grid[i].b2, grid[i].s);
        num += d[i] * grid[i].s;
        den += grid[i].s * grid[i].s;
    }
    if (den > 0.0) out.kappa = num / den;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double e = std::abs(d[i] - out.kappa * grid[i].s);
        if (e > out.max_error || std::isnan(e)) {
            out.max_error = e;
            out.worst = grid[i];
        }
    }
    return out;
}

}  // namespace finsler
