#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fd_oracle.hpp"
#include "finsler/solutions.hpp"

using namespace finsler;
using doctest::Approx;
using finsler::testing::fd_derivative;

TEST_CASE("gauss-legendre rules") {
    const GaussLegendreRule& r3 = gauss_legendre(3);
    CHECK(r3.nodes[0] == Approx(-std::sqrt(0.6)).epsilon(1e-15));
    CHECK(r3.nodes[1] == Approx(0.0).epsilon(1e-15));
    CHECK(r3.weights[0] == Approx(5.0 / 9.0).epsilon(1e-15));
    CHECK(r3.weights[1] == Approx(8.0 / 9.0).epsilon(1e-15));
    for (int n : {1, 2, 7, 16, 64}) {
        const GaussLegendreRule& r = gauss_legendre(n);
        double w = 0.0, x2 = 0.0;
        for (int k = 0; k < n; ++k) {
            w += r.weights[k];
            x2 += r.weights[k] * r.nodes[k] * r.nodes[k];
        }
        CHECK(w == Approx(2.0).epsilon(1e-14));
        if (n >= 2) CHECK(x2 == Approx(2.0 / 3.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(gauss_legendre(0), InvalidArgument);
}

TEST_CASE("adaptive quadrature") {
    CHECK(adaptive_gauss_legendre([](double x) { return std::exp(x); }, 0.0, 1.0).value ==
          Approx(std::numbers::e - 1.0).epsilon(1e-14));
    CHECK(adaptive_gauss_legendre([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0).value ==
          Approx(std::numbers::pi / 4.0).epsilon(1e-14));
    // reversed limits
    CHECK(adaptive_gauss_legendre([](double x) { return x; }, 1.0, 0.0).value == Approx(-0.5).epsilon(1e-15));
    const QuadratureResult r = adaptive_gauss_legendre([](double x) { return 1.0 / (0.01 + x * x); }, -1.0, 1.0);
    CHECK(r.value == Approx(20.0 * std::atan(10.0)).epsilon(1e-13));
    CHECK(r.panels.size() > 2);
    for (std::size_t i = 1; i < r.panels.size(); ++i) CHECK(r.panels[i].a == r.panels[i - 1].b);

    CHECK_THROWS_AS(adaptive_gauss_legendre([](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
    QuadratureOptions tight;
    tight.nodes = 4;
    tight.max_depth = 2;
    CHECK_THROWS_AS(adaptive_gauss_legendre([](double x) { return std::cos(200.0 * x); }, 0.0, 1.0, tight),
                    QuadratureError);
}

TEST_CASE("jets integrate on fixed panels") {
    // I(a) = int_0^1 exp(a x) dx at a = 1
    const double a0 = 1.0;
    const QuadratureResult r = adaptive_gauss_legendre([&](double x) { return std::exp(a0 * x); }, 0.0, 1.0);
    const Jet2 a = Jet2::variable_v(a0, 0, 3);
    const Jet2 I = integrate_on_panels([&](double x) { return exp(a * x); }, r.panels, 16, Jet2(0, 3));
    auto exact = [](double t) { return (std::exp(t) - 1.0) / t; };
    CHECK(I.value() == Approx(exact(a0)).epsilon(1e-14));
    CHECK(I.partial(0, 1) == Approx(fd_derivative([&](double h) { return exact(a0 + h); })).epsilon(1e-8));
    // int_0^1 x^k e^x dx: 1, e - 2, 6 - 2e
    CHECK(I.partial(0, 1) == Approx(1.0).epsilon(1e-14));
    CHECK(I.partial(0, 2) == Approx(std::numbers::e - 2.0).epsilon(1e-14));
    CHECK(I.partial(0, 3) == Approx(6.0 - 2.0 * std::numbers::e).epsilon(1e-13));
}

TEST_CASE("eta") {
    const SolutionSpec trivial = make_solution_spec("0", "0", "0", "sqrt(t)");
    CHECK(eta(trivial, 0.5, 0.3) == 0.5 - 0.09);

    const SolutionSpec g0 = make_solution_spec("0.5", "0", "0", "t");
    CHECK(eta(g0, 0.25, 0.1) == Approx(0.2117992566203028966876).epsilon(1e-15));

    // f = lam, g = lam^2 / (1 - lam b^2): F = -log(1 - lam b^2), G = lam^2 b^2 / (1 - lam b^2)
    const SolutionSpec e6 = make_solution_spec("0.3", "0.09/(1 - 0.3*t)", "0", "sqrt(t)");
    CHECK(eta(e6, 0.25, 0.1) == Approx(0.2232053086668007239091).epsilon(1e-13));

    // jet slots: numeric and closed antiderivatives agree to all orders
    const SolutionSpec e6c =
        make_solution_spec("0.3", "0.09/(1 - 0.3*t)", "0", "sqrt(t)", {}, "-log(1 - 0.3*t)", "0.09*t/(1 - 0.3*t)");
    CHECK(eta(e6c, 0.25, 0.1) == Approx(0.2232053086668007239091).epsilon(1e-15));
    const Jet2 ej = eta(e6, Jet2::variable_u(0.25, 2, 3), Jet2::variable_v(0.1, 2, 3));
    const Jet2 ec = eta(e6c, Jet2::variable_u(0.25, 2, 3), Jet2::variable_v(0.1, 2, 3));
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 3; ++b) CHECK(ej.coeff(a, b) == Approx(ec.coeff(a, b)).epsilon(1e-12));
    auto eta_u = [&](double u) { return eta(e6, u, 0.1); };
    CHECK(ej.partial(1, 0) == Approx(fd_derivative([&](double h) { return eta_u(0.25 + h); })).epsilon(1e-8));
    auto d_eta_u = [&](double u) { return fd_derivative([&](double h) { return eta_u(u + h); }, 1e-3); };
    CHECK(ej.partial(2, 0) == Approx(fd_derivative([&](double h) { return d_eta_u(0.25 + h); }, 1e-3)).epsilon(1e-5));

    // e^F - (b^2 - s^2) G = s^2 vanishes at s = 0
    const SolutionSpec bad = make_solution_spec("1/t", "0", "0", "t", {}, "log(t)", "1");
    CHECK_THROWS_AS(eta(bad, 0.3, 0.0), DomainError);
    try {
        eta(bad, 0.3, 0.0);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("b2=0.3") != std::string::npos);
    }
}

TEST_CASE("phi from spec reproduces closed forms") {
    const SolutionSpec e3 = make_solution_spec("0", "0", "0", "(1 + t)*sqrt(t)");
    for (double b : {0.2, 0.5, 0.9})
        for (double f : {-0.9, -0.3, 0.0, 0.01, 0.6, 0.95}) {
            const double s = f * b;
            CHECK(phi_from_spec(e3, b * b, s) == Approx(1.0 + b * b + s * s).epsilon(1e-12));
        }

    const SolutionSpec e4 = make_solution_spec("0", "0", "0", "sqrt(t)/(1 - t)^(3/2)");
    const PhiSpec e4c = phi_from_source("(1 - b2 + 2*s^2)/((1 - b2)^2*sqrt(1 - b2 + s^2))");
    const ClosedFormAgreement a4 = compare_with_closed_form(e4, e4c, bs_grid(0.1, 0.8, 5, 4));
    CHECK(a4.max_error < 1e-8);
    CHECK(std::abs(a4.kappa) < 1e-8);

    // numeric antiderivatives (anchored at 0) for the Example-2 family only
    // differ from the log antiderivative by a constant when eps = 1
    const SolutionSpec e2 = make_solution_spec("-0.75/(1 - 0.75*t)", "0", "0", "sqrt(t/(1 - 0.25*t))");
    const PhiSpec e2c = phi_from_source("sqrt(1 - b2 + 0.25*s^2)/(1 - b2)");
    const ClosedFormAgreement a2 = compare_with_closed_form(e2, e2c, bs_grid(0.1, 0.8, 5, 4));
    CHECK(a2.max_error < 1e-8);
}

TEST_CASE("reconstructed phi jets") {
    const SolutionSpec e4 = make_solution_spec("0", "0", "0", "sqrt(t)/(1 - t)^(3/2)");
    const PhiSpec closed = phi_from_source("(1 - b2 + 2*s^2)/((1 - b2)^2*sqrt(1 - b2 + s^2))");
    const PhiSpec rec = reconstructed_phi(e4);
    for (double s : {0.0, 1e-4, 0.02, 0.3, -0.45}) {
        const Jet2 jr = rec.jet(0.25, s, 1, 6);
        const Jet2 jc = closed.jet(0.25, s, 1, 6);
        for (int a = 0; a <= 1; ++a)
            for (int b = 0; b <= 6; ++b) {
                const double scale = 1.0 + std::abs(jc.coeff(a, b));
                // |s| / b = 0.9 costs the top coefficients a digit
                CHECK(std::abs(jr.coeff(a, b) - jc.coeff(a, b)) < (b + a < 6 ? 1e-10 : 1e-8) * scale);
            }
    }
    // jets with non-trivial input are composed
    const Jet2 b2 = Jet2::variable_u(0.25, 1, 3) + 0.5 * Jet2::variable_v(0.0, 1, 3);
    const Jet2 sj = Jet2::variable_v(0.1, 1, 3) * 2.0 - 0.1;
    const Jet2 r = rec.phi(b2, sj);
    const Jet2 c = closed.phi(b2, sj);
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 3; ++b) CHECK(r.coeff(a, b) == Approx(c.coeff(a, b)).epsilon(1e-9));

    CHECK_THROWS_AS(phi_from_spec(e4, 0.25, 0.5), DomainError);
    CHECK_THROWS_AS(phi_from_spec(e4, 0.0, 0.0), DomainError);
}

TEST_CASE("oddness structure with h = 0") {
    const SolutionSpec e3 = make_solution_spec("0", "0", "0", "(1 + t)*sqrt(t)");
    for (double s : {0.05, 0.2, 0.4}) {
        const double b2 = 0.3;
        CHECK(phi_from_spec(e3, b2, s) + phi_from_spec(e3, b2, -s) == Approx(2.0 * (1.0 + b2 + s * s)).epsilon(1e-13));
    }
}

TEST_CASE("psi identity residual") {
    const SolutionSpec e3 = make_solution_spec("0", "0", "0", "(1 + t)*sqrt(t)");
    const PhiSpec e3c = phi_from_source("1 + b2 + s^2");
    CHECK(std::abs(psi_identity_residual(e3, e3c, 0.5, 0.3)) < 1e-15);

    const SolutionSpec funk = make_solution_spec("0", "0", "1/(1 - t)", "sqrt(t/(1 - t))", {}, "0", "0");
    const PhiSpec funkc = phi_from_source("(sqrt(1 - b2 + s^2) + s)/(1 - b2)");
    double worst = 0.0;
    for (const BsPoint& q : bs_grid(0.05, 0.9, 10, 10)) worst = std::max(worst, std::abs(psi_identity_residual(funk, funkc, q.b2, q.s)));
    CHECK(worst < 1e-10);

    const SolutionSpec wrong = make_solution_spec("0", "0", "0", "sqrt(t/(1 - t)) + 0.1");
    worst = 0.0;
    for (const BsPoint& q : bs_grid(0.05, 0.9, 10, 10)) worst = std::max(worst, std::abs(psi_identity_residual(wrong, funkc, q.b2, q.s)));
    CHECK(worst > 1e-3);
}

TEST_CASE("characteristic residual") {
    const SolutionSpec any = make_solution_spec("0", "0", "0", "exp(t)*sqrt(t) + t^3");
    CHECK(std::abs(characteristic_residual(any, 0.4, 0.3)) < 1e-14);

    // the stated f, g of the last example, numeric antiderivatives
    const SolutionSpec e6 = make_solution_spec("lam", "lam^2/(1 - lam*t)", "0", "sqrt(t)", {{"lam", 0.3}});
    const SolutionSpec e2 = make_solution_spec("-0.75/(1 - 0.75*t)", "0", "0", "sqrt(t/(1 - 0.25*t))", {},
                                               "log(1 - 0.75*t)");
    double w6 = 0.0, w2 = 0.0;
    for (const BsPoint& q : bs_grid(0.1, 0.9, 10, 10)) {
        w6 = std::max(w6, std::abs(characteristic_residual(e6, q.b2, q.s)));
        w2 = std::max(w2, std::abs(characteristic_residual(e2, q.b2, q.s)));
    }
    CHECK(w6 < 1e-9);
    CHECK(w2 < 1e-9);

    // an antiderivative that does not belong to f breaks it
    const SolutionSpec wrong = make_solution_spec("1", "0", "0", "t", {}, "0");
    CHECK(std::abs(characteristic_residual(wrong, 0.4, 0.3)) > 1e-2);
    CHECK_THROWS_AS(characteristic_residual(any, 0.4, 0.0), DomainError);
}

TEST_CASE("I_n closed antiderivatives") {
    const double b2 = 0.7, s = 0.3;
    CHECK(I_n(1, b2, s) == Approx(-1.0 / s).epsilon(1e-15));
    CHECK(I_n(3, b2, s) == Approx(-b2 / s - s).epsilon(1e-15));

    const Jet2 j2 = I_n(2, Jet2::variable_u(1.0, 0, 1), Jet2::variable_v(0.4, 0, 1));
    CHECK(std::abs(j2.partial(0, 1) - std::sqrt(1.0 - 0.16) / 0.16) < 1e-10);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ub(0.2, 2.0), uf(-0.95, 0.95);
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k < 10; ++k) {
            const double b = ub(rng);
            double sv = uf(rng) * b;
            if (std::abs(sv) < 1e-3) sv = 0.1 * b;
            const Jet2 j = I_n(n, Jet2::variable_u(b * b, 0, 1), Jet2::variable_v(sv, 0, 1));
            const double integrand = std::pow(b * b - sv * sv, 0.5 * (n - 1)) / (sv * sv);
            CHECK(std::abs(j.partial(0, 1) - integrand) < 1e-10 * (1.0 + std::abs(integrand)));
        }
    const std::vector<double> t = I_n_table(4, b2, s);
    REQUIRE(t.size() == 4);
    CHECK(t[2] == I_n(3, b2, s));
    CHECK_THROWS_AS(I_n(0, b2, s), InvalidArgument);
}

TEST_CASE("numeric antiderivatives match closed ones") {
    const SolutionSpec closed = make_solution_spec("0.5", "0", "0", "t^1.5", {}, "0.5*t", "0");
    const SolutionSpec numeric = make_solution_spec("0.5", "0", "0", "t^1.5");
    const SolutionSpec mixed = make_solution_spec("0.3 + 0.2*t", "0.1*exp(t)", "0", "sqrt(t)");
    for (const BsPoint& q : bs_grid(0.2, 0.9, 3, 4)) {
        CHECK(phi_from_spec(numeric, q.b2, q.s) == Approx(phi_from_spec(closed, q.b2, q.s)).epsilon(1e-12));
        // F = 0.3 t + 0.2 t^2 (since g b^2 is included), closed F with numeric G
        SolutionSpec half = mixed;
        half.F_closed = expr::parse_t("0.3*t + 0.1*t^2 + 0.1*(exp(t)*(t - 1) + 1)");
        CHECK(eta(half, q.b2, q.s) == Approx(eta(mixed, q.b2, q.s)).epsilon(1e-12));
    }
}

TEST_CASE("regularity in terms of Phi") {
    const SolutionSpec funk = make_solution_spec("0", "0", "1/(1 - t)", "sqrt(t/(1 - t))");
    const auto grid = bs_grid(0.05, 0.9, 10, 10);
    const SolutionRegularityReport r = finsler_regularity(funk, grid, 3);
    CHECK(r.pass);
    CHECK(r.margin1 > 0.0);
    CHECK(r.margin2_pos > 0.0);
    CHECK(r.margin2_neg > 0.0);
    CHECK(r.node_pass.size() == grid.size());

    const SolutionSpec neg = make_solution_spec("0", "0", "0", "-sqrt(t)");
    const SolutionRegularityReport rn = finsler_regularity(neg, grid, 3);
    CHECK_FALSE(rn.pass);
    CHECK_FALSE(rn.ineq1_pass);
    for (bool ok : rn.node_pass) CHECK_FALSE(ok);

    // Phi < 0 but decreasing in s: only the n = 2 condition holds
    const SolutionSpec fixture = make_solution_spec("0", "0", "0", "t - 2");
    const SolutionRegularityReport r2 = finsler_regularity(fixture, grid, 2);
    const SolutionRegularityReport r3 = finsler_regularity(fixture, grid, 3);
    CHECK(r2.pass);
    CHECK(r2.ineq2_pass);
    CHECK_FALSE(r2.ineq1_pass);
    CHECK_FALSE(r3.pass);

    // the limit at s = 0
    const SolutionRegularityReport r0 = finsler_regularity(funk, {{0.25, 0.0}}, 3);
    CHECK(r0.margin2 > 0.0);
    CHECK(r0.margin2 == Approx(finsler_regularity(funk, {{0.25, 1e-5}}, 3).margin2).epsilon(1e-8));
}
