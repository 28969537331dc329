#include <cmath>
#include <random>

#include "doctest.h"
#include "fd_oracle.hpp"
#include "finsler/chart.hpp"

using namespace finsler;
using doctest::Approx;

namespace {

// a = e^{2 x1} delta in R^2, b = 0
RiemannChart conformal_plane() {
    RiemannChart::Callbacks cb;
    cb.metric = [](const Vector& x) { return Matrix(std::exp(2.0 * x[0]) * Matrix::Identity(2, 2)); };
    cb.metric_derivative = [](const Vector& x) {
        return std::vector<Matrix>{2.0 * std::exp(2.0 * x[0]) * Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
    };
    cb.one_form = [](const Vector&) { return Vector(Vector::Zero(2)); };
    cb.one_form_jacobian = [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); };
    return RiemannChart(2, "conformal_plane", cb);
}

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) out[i++] = e;
    return out;
}

}  // namespace

TEST_CASE("christoffel symbols of flat and conformally flat charts") {
    const auto flat = christoffel(euclidean_chart(3), vec({0.1, 0.2, 0.3}));
    for (const auto& g : flat) CHECK(g.cwiseAbs().maxCoeff() == 0.0);

    const auto g = christoffel(conformal_plane(), vec({0.3, -0.2}));
    CHECK(g[0](0, 0) == Approx(1.0));
    CHECK(g[0](1, 1) == Approx(-1.0));
    CHECK(g[1](0, 1) == Approx(1.0));
    CHECK(g[1](1, 0) == Approx(1.0));
    CHECK(g[0](0, 1) == Approx(0.0));
    CHECK(g[1](0, 0) == Approx(0.0));

    const auto mu0 = christoffel(mu_family_chart(3, 0.5), Vector::Zero(3));
    for (const auto& m : mu0) CHECK(m.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mu-family analytic derivatives agree with finite differences") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (double mu : {-1.0, 0.5}) {
        const RiemannChart c = mu_family_chart(3, mu);
        for (int trial = 0; trial < 5; ++trial) {
            const Vector x = vec({u(rng), u(rng), u(rng)});
            const auto da = c.metric_derivative(x);
            const Matrix db = c.one_form_jacobian(x);
            for (int k = 0; k < 3; ++k) {
                for (int i = 0; i < 3; ++i) {
                    for (int j = 0; j < 3; ++j) {
                        const double fd = testing::fd_derivative([&](double t) {
                            Vector xs = x;
                            xs[k] += t;
                            return c.metric(xs)(i, j);
                        });
                        CHECK(da[static_cast<std::size_t>(k)](i, j) == Approx(fd).epsilon(1e-9));
                    }
                    const double fdb = testing::fd_derivative([&](double t) {
                        Vector xs = x;
                        xs[k] += t;
                        return c.one_form(xs)[i];
                    });
                    CHECK(db(i, k) == Approx(fdb).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("metric compatibility of the Levi-Civita connection") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (double mu : {-1.0, 0.5, 2.0}) {
        const RiemannChart c = mu_family_chart(3, mu);
        const Vector x = vec({u(rng), u(rng), u(rng)});
        const ChartPoint p = evaluate_chart(c, x);
        const auto g = christoffel(p);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double r = p.da[static_cast<std::size_t>(k)](i, j);
                    for (int l = 0; l < 3; ++l) r -= p.a(l, j) * g[static_cast<std::size_t>(l)](i, k) + p.a(i, l) * g[static_cast<std::size_t>(l)](j, k);
                    CHECK(std::abs(r) < 1e-8);
                }
    }
}

TEST_CASE("b^2 gradient matches finite differences") {
    const RiemannChart c = mu_family_chart(2, -1.0);
    const Vector x = vec({0.2, -0.3});
    const ChartPoint p = evaluate_chart(c, x);
    for (int k = 0; k < 2; ++k) {
        const double fd = testing::fd_derivative([&](double t) {
            Vector xs = x;
            xs[k] += t;
            return evaluate_chart(c, xs).b2;
        });
        CHECK(p.db2[k] == Approx(fd).epsilon(1e-9));
    }
    CHECK(p.b2 == Approx(x.squaredNorm() / (1.0 - x.squaredNorm())));
}

TEST_CASE("covariant derivative of beta") {
    const auto d = beta_derivatives(euclidean_chart(3), vec({0.1, 0.2, 0.3}));
    CHECK((d.b_cov - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.s.cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.b_cov - (d.r + d.s)).cwiseAbs().maxCoeff() == 0.0);

    const auto shifted = beta_derivatives(euclidean_chart(2, {}, vec({0.3, -0.7})), vec({0.1, 0.2}));
    CHECK((shifted.b_cov - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

    Matrix L(2, 2);
    L << 0, 1, 1, 0;  // b = d(x1 x2)
    const auto exact = beta_derivatives(euclidean_chart(2, L), vec({0.4, -0.1}));
    CHECK(exact.s.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conformal factor") {
    const ConformalFactor e = conformal_factor(euclidean_chart(3, {}, vec({0.2, 0.0, -0.1})), vec({0.1, 0.2, 0.3}));
    CHECK(e.accepted);
    CHECK(e.c == Approx(1.0));
    CHECK_FALSE(e.trivial);

    Matrix L(2, 2);
    L << 0, 1, 1, 0;
    const ConformalFactor r = try_conformal_factor(euclidean_chart(2, L), vec({0.4, -0.1}));
    CHECK_FALSE(r.accepted);
    CHECK_THROWS_AS(conformal_factor(euclidean_chart(2, L), vec({0.4, -0.1})), NotConformalError);

    const RiemannChart mu = mu_family_chart(3, -1.0);
    CHECK(conformal_factor(mu, Vector::Zero(3)).c == Approx(1.0));
    const ConformalFactor m = try_conformal_factor(mu, vec({0.2, -0.1, 0.3}));
    CHECK(m.accepted);

    const ConformalFactor t = try_conformal_factor(euclidean_chart(2, Matrix::Zero(2, 2), vec({0.5, 0.1})), vec({0.1, 0.1}));
    CHECK(t.accepted);
    CHECK(t.trivial);
}

TEST_CASE("alpha spray") {
    CHECK(alpha_spray(euclidean_chart(2), vec({0.3, 0.1}), vec({1.0, 2.0})).norm() == 0.0);
    const Vector g = alpha_spray(conformal_plane(), vec({0.2, 0.4}), vec({1.0, 0.0}));
    CHECK(g[0] == Approx(0.5));
    CHECK(g[1] == Approx(0.0));
    const RiemannChart mu = mu_family_chart(3, 0.5);
    const Vector x = vec({0.1, -0.3, 0.2}), y = vec({0.4, 0.5, -0.6});
    CHECK((alpha_spray(mu, x, 2.0 * y) - 4.0 * alpha_spray(mu, x, y)).norm() < 1e-14);
}

TEST_CASE("chart domain and degeneracy") {
    const RiemannChart mu = mu_family_chart(2, -1.0);
    CHECK_FALSE(mu.contains(vec({0.8, 0.8})));
    CHECK_THROWS_AS(evaluate_chart(mu, vec({0.8, 0.8})), DomainError);
    RiemannChart::Callbacks cb;
    cb.metric = [](const Vector&) { Matrix m(2, 2); m << 1, 2, 2, 1; return m; };
    cb.metric_derivative = [](const Vector&) { return std::vector<Matrix>(2, Matrix::Zero(2, 2)); };
    cb.one_form = [](const Vector&) { return Vector(Vector::Zero(2)); };
    cb.one_form_jacobian = [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); };
    CHECK_THROWS_AS(evaluate_chart(RiemannChart(2, "bad", cb), Vector::Zero(2)), MetricDegenerateError);
}
