#include <cmath>
#include <random>

#include "doctest.h"
#include "finsler/douglas.hpp"

using namespace finsler;
using doctest::Approx;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) out[i++] = e;
    return out;
}

void check_invariants(const DouglasTensor& d, double tol) {
    const TensorInvariants t = tensor_invariants(d);
    CHECK(t.symmetry < tol);
    CHECK(t.contraction < tol);
    CHECK(t.trace < tol);
}

}  // namespace

TEST_CASE("Riemannian metrics have vanishing Douglas tensor") {
    const PhiSpec one = phi_from_source("1");
    for (double mu : {-1.0, 0.5}) {
        const RiemannChart c = mu_family_chart(3, mu);
        const DouglasTensor d = douglas_generic(c, one, vec({0.2, -0.1, 0.3}), vec({0.3, 1.0, -0.5}));
        CHECK(douglas_norm(d) < 1e-8);
        CHECK(d.spray_scale < 1e-8);  // the spray of alpha is quadratic in y
    }
}

TEST_CASE("Randers metrics: closed beta is Douglas, non-closed is not") {
    const PhiSpec randers = phi_from_source("1 + s");
    Matrix closed(2, 2), open(2, 2);
    closed << 0, 1, 1, 0;  // d(x1 x2)
    open << 0, 1, 0, 0;    // b = (x2, 0)
    const Vector x = vec({0.3, 0.2}), y = vec({0.6, -0.8});
    const DouglasTensor dc = douglas_generic(euclidean_chart(2, closed), randers, x, y);
    CHECK(dc.max_abs() < 1e-7);
    const DouglasTensor dn = douglas_generic(euclidean_chart(2, open), randers, x, y);
    CHECK(dn.max_abs() > 1e-3);
    check_invariants(dn, 1e-9);
}

TEST_CASE("closed form agrees with the generic route off the Douglas class") {
    // phi is not a Douglas solution, so both tensors are far from zero.
    const PhiSpec phi = phi_from_source("1 + s + 0.2*s^3 + b2*s^2 + 0.1*b2");
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int n : {2, 3, 4}) {
        for (const RiemannChart& c : {euclidean_chart(n), mu_family_chart(n, -1.0), mu_family_chart(n, 0.5)}) {
            Vector x(n), y(n);
            for (int i = 0; i < n; ++i) {
                x[i] = u(rng);
                y[i] = u(rng) + (i == 0 ? 1.0 : 0.0);
            }
            const DouglasTensor dt = douglas_generic(c, phi, x, y);
            const DouglasTensor dcf = douglas_closed_form(c, phi, x, y);
            double worst = 0.0;
            for (std::size_t k = 0; k < dt.values().size(); ++k)
                worst = std::max(worst, std::abs(dt.values()[k] - dcf.values()[k]));
            INFO("n=" << n << " chart=" << c.kind());
            CHECK(dt.max_abs() > 1e-3);
            CHECK(worst < 1e-11 * (1.0 + dt.max_abs()));
            CHECK(worst < 1e-7 * (1.0 + dt.spray_scale));
            check_invariants(dt, 1e-9);
            check_invariants(dcf, 1e-9);
            const DouglasTensor d3 = douglas_generic(c, phi, x, 3.0 * y);
            CHECK(homogeneity_defect(dt, d3, 3.0) < 1e-8);
        }
    }
}

TEST_CASE("closed form vanishes for phi = 1") {
    const DouglasTensor d = douglas_closed_form(mu_family_chart(3, 0.5), phi_from_source("1"), vec({0.1, 0.2, 0.3}),
                                                vec({1.0, 0.0, 0.5}));
    CHECK(d.max_abs() == 0.0);
}

TEST_CASE("Douglas condition and PDE residual") {
    CHECK(douglas_condition(phi_from_source("1 + b2 + s^2"), 0.25, 0.3).residual == 0.0);
    const DouglasCondition c = douglas_condition(phi_from_source("1 + s + s^3"), 0.25, 0.3);
    CHECK(c.residual == Approx(-0.63740948963419405810).epsilon(1e-12));

    const expr::Expr zero = expr::parse_t("0");
    CHECK(pde_residual(phi_from_source("1 + b2 + s^2"), zero, zero, 0.3, 0.2) == 0.0);
    CHECK(pde_residual(phi_from_source("1 + s"), zero, zero, 0.3, 0.2) == 0.0);
}

TEST_CASE("is_douglas verdicts") {
    Matrix open(2, 2);
    open << 0, 1, 0, 0;
    const DouglasVerdict bad = is_douglas(euclidean_chart(2, open), phi_from_source("1 + s"), 10, 1, 1e-6);
    CHECK_FALSE(bad.douglas);
    CHECK(bad.worst_norm > 1e-3);

    const DouglasVerdict riem = is_douglas(mu_family_chart(3, -1.0), phi_from_source("1"), 10, 2, 1e-6, {}, 2);
    CHECK(riem.douglas);
    CHECK_FALSE(riem.trivial);

    const DouglasVerdict triv =
        is_douglas(euclidean_chart(2, Matrix::Zero(2, 2), vec({0.3, 0.1})), phi_from_source("1 + s + s^3"), 5, 3, 1e-6);
    CHECK(triv.douglas);
    CHECK(triv.trivial);
}

TEST_CASE("is_douglas is deterministic across thread counts") {
    const PhiSpec phi = phi_from_source("1 + s + 0.2*s^3");
    const DouglasVerdict a = is_douglas(mu_family_chart(3, 0.5), phi, 8, 42, 1e-6, {}, 1);
    const DouglasVerdict b = is_douglas(mu_family_chart(3, 0.5), phi, 8, 42, 1e-6, {}, 4);
    CHECK(a.norms == b.norms);
}
