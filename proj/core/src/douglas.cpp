#include "finsler/douglas.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "finsler/errors.hpp"
#include "finsler/taylor_poly.hpp"

namespace finsler {

double DouglasTensor::frobenius() const {
    double s = 0.0;
    for (double e : v_) s += e * e;
    return std::sqrt(s);
}

double DouglasTensor::max_abs() const {
    double m = 0.0;
    for (double e : v_) m = std::max(m, std::abs(e));
    return m;
}

TensorInvariants tensor_invariants(const DouglasTensor& d) {
    const int n = d.dim();
    const double scale = 1.0 + d.max_abs();
    TensorInvariants t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = d(i, j, k, l);
                    for (double w : {d(i, j, l, k), d(i, k, j, l), d(i, k, l, j), d(i, l, j, k), d(i, l, k, j)})
                        t.symmetry = std::max(t.symmetry, std::abs(v - w) / scale);
                }
    const double ynorm = d.y.size() ? d.y.norm() : 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double c = 0.0;
                for (int l = 0; l < n; ++l) c += d(i, j, k, l) * d.y[l];
                t.contraction = std::max(t.contraction, std::abs(c) / (scale * ynorm));
            }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double tr = 0.0;
            for (int m = 0; m < n; ++m) tr += d(m, j, k, m);
            t.trace = std::max(t.trace, std::abs(tr) / scale);
        }
    return t;
}

double homogeneity_defect(const DouglasTensor& at_y, const DouglasTensor& at_lambda_y, double lambda) {
    const double scale = 1.0 + at_y.max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < at_y.values().size(); ++i)
        worst = std::max(worst, std::abs(at_lambda_y.values()[i] - at_y.values()[i] / lambda) / scale);
    return worst;
}

namespace {

MonomialBasis::Exponent cubic(int j, int k, int l) {
    MonomialBasis::Exponent e{};
    ++e[static_cast<std::size_t>(j)];
    ++e[static_cast<std::size_t>(k)];
    ++e[static_cast<std::size_t>(l)];
    return e;
}

}  // namespace

DouglasTensor douglas_generic(const ChartPoint& p, const PhiSpec& phi, const Vector& y) {
    const int n = p.n;
    constexpr int D = 6;   // y-degree of F^2
    constexpr int Dg = 4;  // y-degree of g_ij, g^ij and G^i
    if (y.size() != n) throw InvalidArgument("y has the wrong dimension");
    const AlphaBeta ab = alpha_beta(p, y);
    spray_quantities(phi, p.b2, ab.s);  // regularity at the point

    // alpha^2 and beta with first-order x dependence
    std::vector<TaylorPoly> yv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) yv[static_cast<std::size_t>(i)] = TaylorPoly::variable(n, D, i, y[i]);
    FieldJet alpha2 = FieldJet::constant(n, n, D, 0.0);
    FieldJet beta = FieldJet::constant(n, n, D, 0.0);
    for (int i = 0; i < n; ++i) {
        const TaylorPoly& yi = yv[static_cast<std::size_t>(i)];
        beta.base() += yi * p.b[i];
        for (int k = 0; k < n; ++k) beta.dx(k) += yi * p.db(i, k);
        for (int j = 0; j < n; ++j) {
            const TaylorPoly yy = yi * yv[static_cast<std::size_t>(j)];
            alpha2.base() += yy * p.a(i, j);
            for (int k = 0; k < n; ++k) alpha2.dx(k) += yy * p.da[static_cast<std::size_t>(k)](i, j);
        }
    }
    const FieldJet s = beta / sqrt(alpha2);
    const double s0 = s.value();
    FieldJet dv = s - s0;
    dv.base().coeff(0) = 0.0;
    const FieldJet du = FieldJet::x_affine(n, n, D, 0.0, as_span(p.db2));
    const Jet2 pj = phi.jet(p.b2, s0, 1, D + 1);
    const FieldJet Phi = compose_bivariate(pj, du, dv, 1, D + 1);
    const FieldJet F2 = alpha2 * Phi * Phi;
    if (!F2.all_finite()) throw EvaluationError("non-finite F^2 jet", "F^2");

    // g_ij = 1/2 d^2 F^2 / dy^i dy^j
    std::vector<TaylorPoly> gm(static_cast<std::size_t>(n * n));
    Matrix M0(n, n);
    for (int i = 0; i < n; ++i) {
        const TaylorPoly di = F2.base().derivative(i);
        for (int j = i; j < n; ++j) {
            TaylorPoly gij = (di.derivative(j) * 0.5).truncated(Dg);
            M0(i, j) = M0(j, i) = gij.value();
            gm[static_cast<std::size_t>(i * n + j)] = gij;
            gm[static_cast<std::size_t>(j * n + i)] = std::move(gij);
        }
    }
    const Matrix M0inv = inverse_general(M0);

    // g^{-1} = sum_k (-M0^{-1} N)^k M0^{-1}, evaluated by Horner
    auto at = [n](std::vector<TaylorPoly>& m, int i, int j) -> TaylorPoly& { return m[static_cast<std::size_t>(i * n + j)]; };
    std::vector<TaylorPoly> K(static_cast<std::size_t>(n * n), TaylorPoly(n, Dg));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            TaylorPoly& kij = at(K, i, j);
            for (int l = 0; l < n; ++l) {
                TaylorPoly nlj = at(gm, l, j);
                nlj.coeff(0) = 0.0;
                kij -= nlj * M0inv(i, l);
            }
        }
    std::vector<TaylorPoly> inv(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) at(inv, i, j) = TaylorPoly::constant(n, Dg, M0inv(i, j));
    for (int it = 0; it < Dg; ++it) {
        std::vector<TaylorPoly> next(static_cast<std::size_t>(n * n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                TaylorPoly acc = TaylorPoly::constant(n, Dg, M0inv(i, j));
                for (int l = 0; l < n; ++l) TaylorPoly::multiply_add(at(K, i, l), at(inv, l, j), acc);
                at(next, i, j) = std::move(acc);
            }
        inv = std::move(next);
    }

    // G^i = 1/4 g^{il} ( [F^2]_{x^k y^l} y^k - [F^2]_{x^l} )
    std::vector<TaylorPoly> y4(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) y4[static_cast<std::size_t>(k)] = TaylorPoly::variable(n, Dg, k, y[k]);
    std::vector<TaylorPoly> term(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        TaylorPoly t = -F2.dx(l).truncated(Dg);
        for (int k = 0; k < n; ++k)
            TaylorPoly::multiply_add(F2.dx(k).derivative(l).truncated(Dg), y4[static_cast<std::size_t>(k)], t);
        term[static_cast<std::size_t>(l)] = std::move(t);
    }
    std::vector<TaylorPoly> G(static_cast<std::size_t>(n), TaylorPoly(n, Dg));
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) TaylorPoly::multiply_add(at(inv, i, l), term[static_cast<std::size_t>(l)], G[static_cast<std::size_t>(i)]);
        G[static_cast<std::size_t>(i)] *= 0.25;
    }

    // W^i = G^i - P y^i / (n + 1), P = dG^m / dy^m
    TaylorPoly P(n, 3);
    for (int m = 0; m < n; ++m) P += G[static_cast<std::size_t>(m)].derivative(m).truncated(3);
    DouglasTensor out(n);
    out.x = p.x;
    out.y = y;
    const MonomialBasis& basis3 = P.basis();
    double g3 = 0.0;
    for (int i = 0; i < n; ++i) {
        TaylorPoly W = G[static_cast<std::size_t>(i)].truncated(3);
        W -= P * TaylorPoly::variable(n, 3, i, y[i]) * (1.0 / (n + 1));
        if (!W.all_finite()) throw EvaluationError("non-finite spray jet", "W[" + std::to_string(i) + "]");
        const TaylorPoly Gi = G[static_cast<std::size_t>(i)].truncated(3);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const std::size_t idx = basis3.index_of(cubic(j, k, l));
                    out(i, j, k, l) = W.partial(idx);
                    const double gd = Gi.partial(idx);
                    g3 += gd * gd;
                }
    }
    out.spray_scale = std::sqrt(g3);
    return out;
}

DouglasTensor douglas_generic(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y) {
    return douglas_generic(evaluate_chart(chart, x), phi, y);
}

DouglasTensor douglas_closed_form(const ChartPoint& p, const PhiSpec& phi, const Vector& y, double c) {
    const int n = p.n;
    const AlphaBeta ab = alpha_beta(p, y);
    spray_quantities(phi, p.b2, ab.s);
    const ConformalQuantities q = conformal_quantities(phi, p.b2, ab.s, n);
    const double a = ab.alpha, s = ab.s;
    const double a2 = a * a, a3 = a2 * a;
    const Vector ylow = p.a * y;
    const Vector& bl = p.b;
    const Vector& bu = p.b_up;
    const Matrix& A = p.a;
    const double T = q.T, T2 = q.T2, T22 = q.T22, T222 = q.T222;
    const double H2 = q.H2, H22 = q.H22, H222 = q.H222;
    auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };

    auto X1 = [&](int i, int j, int k, int l) {
        return ((T - s * T2) * A(k, l) + T22 * bl[l] * bl[k]) * delta(i, j) +
               ((s / a) * (3.0 * T22 + s * T222) * ylow[l] * ylow[j] - (T22 + s * T222) * bl[l] * ylow[j]) * bl[k] *
                   y[i] / a2;
    };
    auto X2 = [&](int i, int j, int k, int l) {
        return s * T22 * ((ylow[k] * bl[l] + ylow[l] * bl[k]) * delta(i, j) + A(j, l) * bl[k] * y[i]) +
               (T - s * T2 - s * s * T22) * (ylow[l] * delta(i, j) + A(l, j) * y[i]) * ylow[k] / a;
    };
    auto X4 = [&](int i, int j, int k, int l) {
        return ((H2 - s * H22) * (bl[j] - (s / a) * ylow[j]) * A(k, l) -
                (H2 - s * H22 - s * s * H222) * bl[l] * ylow[j] * ylow[k] / a2 - (s * H222 / a) * bl[k] * bl[l] * ylow[j]) *
               bu[i];
    };
    auto cyc = [](auto&& X, int i, int j, int k, int l) { return X(i, j, k, l) + X(i, k, l, j) + X(i, l, j, k); };

    const double ty = (3.0 * T - 3.0 * s * T2 - 6.0 * s * s * T22 - s * s * s * T222) / a3;
    const double hy = (s / a3) * (3.0 * H2 - 3.0 * s * H22 - s * s * H222);
    DouglasTensor out(n);
    out.x = p.x;
    out.y = y;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double yyy = ylow[k] * ylow[j] * ylow[l];
                    const double bbb = bl[l] * bl[k] * bl[j];
                    double v = cyc(X1, i, j, k, l) / a - cyc(X2, i, j, k, l) / a2;
                    v += (ty * yyy + T222 * bbb) * y[i] / a2;
                    v += cyc(X4, i, j, k, l) / a;
                    v += (hy * yyy + H222 * bbb) * bu[i] / a;
                    out(i, j, k, l) = c * v;
                }
    return out;
}

DouglasTensor douglas_closed_form(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y,
                                  double c) {
    return douglas_closed_form(evaluate_chart(chart, x), phi, y, c);
}

DouglasTensor douglas_closed_form(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y) {
    const ChartPoint p = evaluate_chart(chart, x);
    const auto gamma = christoffel(p);
    const ConformalFactor cf = try_conformal_factor(p, beta_derivatives(p, gamma), 1e-9);
    if (!cf.accepted) throw NotConformalError("beta is not closed-conformal", cf.residual);
    return douglas_closed_form(p, phi, y, cf.c);
}

double douglas_norm(const DouglasTensor& d) {
    const double scale = std::isnan(d.spray_scale) ? 0.0 : d.spray_scale;
    return d.frobenius() / (1.0 + scale);
}

DouglasCondition douglas_condition(const PhiSpec& phi, double b2, double s) {
    const ConformalQuantities q = conformal_quantities(phi, b2, s, 2);
    DouglasCondition c;
    c.residual = q.H2 - s * q.H22;
    c.g = q.H22;
    c.f = 2.0 * q.H - c.g * s * s;
    return c;
}

double pde_residual(const PhiSpec& phi, const expr::Expr& f, const expr::Expr& g, double b2, double s) {
    const Jet2 j = phi.jet(b2, s, 1, 2);
    const double p = j.partial(0, 0), p1 = j.partial(1, 0), p2 = j.partial(0, 1);
    const double p12 = j.partial(1, 1), p22 = j.partial(0, 2);
    const double den2 = p - s * p2 + (b2 - s * s) * p22;
    if (!(den2 > 0.0)) throw RegularityError("phi - s phi_2 + (b^2 - s^2) phi_22 is not positive", b2, s);
    const double lhs = p22 - 2.0 * (p1 - s * p12);
    const double rhs = (f(b2) + g(b2) * s * s) * den2;
    return lhs - rhs;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    threads = std::clamp(threads, 1, count);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto run = [&](int worker) {
        for (int i = worker; i < count; i += threads) {
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

DouglasVerdict is_douglas(const RiemannChart& chart, const PhiSpec& phi, int count, std::uint64_t seed, double tol,
                          const SamplerOptions& options, int threads) {
    if (count < 1) throw InvalidArgument("is_douglas needs at least one sample");
    PointSampler sampler(chart, phi.b0, seed, options);
    const std::vector<Sample> samples = sampler.draw(count);
    std::vector<double> norms(samples.size(), 0.0);
    std::vector<char> trivial(samples.size(), 0);
    parallel_for(count, threads, [&](int i) {
        const Sample& smp = samples[static_cast<std::size_t>(i)];
        const ChartPoint p = evaluate_chart(chart, smp.x);
        const auto gamma = christoffel(p);
        const ConformalFactor cf = try_conformal_factor(p, beta_derivatives(p, gamma), 1e-9);
        trivial[static_cast<std::size_t>(i)] = cf.trivial ? 1 : 0;
        norms[static_cast<std::size_t>(i)] = douglas_norm(douglas_generic(p, phi, smp.y));
    });
    DouglasVerdict v;
    v.samples = count;
    v.norms = norms;
    v.trivial = std::all_of(trivial.begin(), trivial.end(), [](char t) { return t != 0; });
    for (std::size_t i = 0; i < norms.size(); ++i)
        if (i == 0 || norms[i] > v.worst_norm || std::isnan(norms[i])) {
            v.worst_norm = norms[i];
            v.worst = samples[i];
        }
    v.douglas = v.worst_norm < tol;
    return v;
}

}  // namespace finsler
