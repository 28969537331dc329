#include "finsler/jet2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace finsler {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

Jet2 delta_of(const Jet2& a) {
    Jet2 d = a;
    d.coeff(0, 0) = 0.0;
    return d;
}

Jet2 apply_series(const Jet2& a, const std::vector<double>& c) {
    return series::compose_series<Jet2>(c, delta_of(a));
}

}  // namespace

Jet2::Jet2(int order_u, int order_v) : du_(order_u), dv_(order_v) {
    if (order_u < 0 || order_v < 0) throw InvalidArgument("Jet2 orders must be non-negative");
    c_.assign(static_cast<std::size_t>((du_ + 1) * (dv_ + 1)), 0.0);
}

Jet2 Jet2::constant(double c, int order_u, int order_v) {
    Jet2 j(order_u, order_v);
    j.c_[0] = c;
    return j;
}

Jet2 Jet2::variable_u(double u0, int order_u, int order_v) {
    Jet2 j = constant(u0, order_u, order_v);
    if (order_u >= 1) j.coeff(1, 0) = 1.0;
    return j;
}

Jet2 Jet2::variable_v(double v0, int order_u, int order_v) {
    Jet2 j = constant(v0, order_u, order_v);
    if (order_v >= 1) j.coeff(0, 1) = 1.0;
    return j;
}

double Jet2::partial(int a, int b) const {
    return coeff(a, b) * factorial(a) * factorial(b);
}

bool Jet2::is_constant() const noexcept {
    return std::all_of(c_.begin() + 1, c_.end(), [](double x) { return x == 0.0; });
}

bool Jet2::depends_only_on_v() const noexcept {
    for (int a = 1; a <= du_; ++a)
        for (int b = 0; b <= dv_; ++b)
            if (c_[index(a, b)] != 0.0) return false;
    return true;
}

bool Jet2::depends_only_on_u() const noexcept {
    for (int a = 0; a <= du_; ++a)
        for (int b = 1; b <= dv_; ++b)
            if (c_[index(a, b)] != 0.0) return false;
    return true;
}

bool Jet2::all_finite() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

Jet2 Jet2::d_du() const {
    if (du_ == 0) return Jet2(0, dv_);
    Jet2 r(du_ - 1, dv_);
    for (int a = 0; a < du_; ++a)
        for (int b = 0; b <= dv_; ++b) r.coeff(a, b) = (a + 1) * coeff(a + 1, b);
    return r;
}

Jet2 Jet2::d_dv() const {
    if (dv_ == 0) return Jet2(du_, 0);
    Jet2 r(du_, dv_ - 1);
    for (int a = 0; a <= du_; ++a)
        for (int b = 0; b < dv_; ++b) r.coeff(a, b) = (b + 1) * coeff(a, b + 1);
    return r;
}

Jet2 Jet2::truncated(int order_u, int order_v) const {
    Jet2 r(order_u, order_v);
    for (int a = 0; a <= std::min(order_u, du_); ++a)
        for (int b = 0; b <= std::min(order_v, dv_); ++b) r.coeff(a, b) = coeff(a, b);
    return r;
}

double Jet2::eval_offset(double du, double dv) const {
    double acc = 0.0;
    for (int a = du_; a >= 0; --a) {
        double inner = 0.0;
        for (int b = dv_; b >= 0; --b) inner = inner * dv + coeff(a, b);
        acc = acc * du + inner;
    }
    return acc;
}

void Jet2::require_same_shape(const Jet2& o) const {
    if (du_ != o.du_ || dv_ != o.dv_)
        throw InvalidArgument("Jet2 order mismatch: (" + std::to_string(du_) + "," +
                              std::to_string(dv_) + ") vs (" + std::to_string(o.du_) + "," +
                              std::to_string(o.dv_) + ")");
}

Jet2& Jet2::operator+=(const Jet2& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
    *this = *this * o;
    return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
    *this = *this / o;
    return *this;
}

Jet2& Jet2::operator*=(double c) {
    for (double& x : c_) x *= c;
    return *this;
}

Jet2& Jet2::operator/=(double c) {
    for (double& x : c_) x /= c;
    return *this;
}

Jet2 operator-(const Jet2& a) { return a * -1.0; }
Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

Jet2 operator*(const Jet2& x, const Jet2& y) {
    if (x.order_u() != y.order_u() || x.order_v() != y.order_v()) {
        Jet2 tmp = x;
        tmp += y;  // throws the shape error
    }
    const int du = x.order_u();
    const int dv = x.order_v();
    Jet2 r(du, dv);
    for (int i = 0; i <= du; ++i)
        for (int j = 0; j <= dv; ++j) {
            const double xij = x.coeff(i, j);
            if (xij == 0.0) continue;
            for (int a = i; a <= du; ++a)
                for (int b = j; b <= dv; ++b) r.coeff(a, b) += xij * y.coeff(a - i, b - j);
        }
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
Jet2 operator+(Jet2 a, double c) { return a += c; }
Jet2 operator+(double c, Jet2 a) { return a += c; }
Jet2 operator-(Jet2 a, double c) { return a -= c; }
Jet2 operator-(double c, const Jet2& a) { return -a + c; }
Jet2 operator*(Jet2 a, double c) { return a *= c; }
Jet2 operator*(double c, Jet2 a) { return a *= c; }
Jet2 operator/(Jet2 a, double c) { return a /= c; }
Jet2 operator/(double c, const Jet2& a) { return reciprocal(a) * c; }

int nilpotency_degree(const Jet2& a) {
    if (a.depends_only_on_u()) return a.order_u();
    if (a.depends_only_on_v()) return a.order_v();
    return a.order_u() + a.order_v();
}

Jet2 reciprocal(const Jet2& a) {
    const double x0 = a.value();
    if (x0 == 0.0 || !std::isfinite(x0)) throw SingularJetError("division by a jet with zero constant term");
    return apply_series(a, series::reciprocal(x0, nilpotency_degree(a)));
}

Jet2 sqrt(const Jet2& a) {
    const double x0 = a.value();
    if (a.is_constant()) {
        if (!(x0 >= 0.0)) throw DomainError("sqrt of negative value " + std::to_string(x0));
        return Jet2::constant(std::sqrt(x0), a.order_u(), a.order_v());
    }
    if (!(x0 > 0.0)) throw DomainError("sqrt jet needs a positive base, got " + std::to_string(x0));
    return apply_series(a, series::sqrt(x0, nilpotency_degree(a)));
}

Jet2 exp(const Jet2& a) {
    if (!std::isfinite(a.value())) throw DomainError("exp of non-finite value");
    return apply_series(a, series::exp(a.value(), nilpotency_degree(a)));
}

Jet2 log(const Jet2& a) {
    const double x0 = a.value();
    if (!(x0 > 0.0)) throw DomainError("log needs a positive argument, got " + std::to_string(x0));
    return apply_series(a, series::log(x0, nilpotency_degree(a)));
}

Jet2 ipow(const Jet2& a, long long k) {
    if (k < 0) return reciprocal(ipow(a, -k));
    Jet2 result = Jet2::constant(1.0, a.order_u(), a.order_v());
    Jet2 base = a;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

Jet2 pow(const Jet2& a, double r) {
    if (std::isfinite(r) && r == std::nearbyint(r) && std::fabs(r) < 1e9)
        return ipow(a, static_cast<long long>(r));
    const double x0 = a.value();
    if (a.is_constant()) {
        if (!(x0 >= 0.0) || (x0 == 0.0 && r < 0.0))
            throw DomainError("non-integer power of non-positive base " + std::to_string(x0));
        return Jet2::constant(std::pow(x0, r), a.order_u(), a.order_v());
    }
    if (!(x0 > 0.0)) throw DomainError("non-integer power needs a positive base, got " + std::to_string(x0));
    return apply_series(a, series::pow(x0, r, nilpotency_degree(a)));
}

Jet2 pow(const Jet2& a, const Jet2& r) {
    if (r.is_constant()) return pow(a, r.value());
    return exp(r * log(a));
}

Jet2 atan(const Jet2& a) {
    if (!std::isfinite(a.value())) throw DomainError("atan of non-finite value");
    return apply_series(a, series::atan(a.value(), nilpotency_degree(a)));
}

}  // namespace finsler
