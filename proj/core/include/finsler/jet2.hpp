#pragma once

#include <span>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/series.hpp"

namespace finsler {

/// Truncated bivariate Taylor expansion f(u0 + du, v0 + dv) of a scalar
/// function of (u, v) = (b^2, s).
///
/// Coefficients are stored normalized: coeff(a, b) = d_u^a d_v^b f / (a! b!).
/// Truncation is a box, 0 <= a <= order_u and 0 <= b <= order_v, so products
/// are exact within the box. The base point is not stored; operands are
/// expected to share one (only the orders are checked).
class Jet2 {
public:
    static constexpr int kDefaultOrderU = 1;
    static constexpr int kDefaultOrderV = 6;

    Jet2() : Jet2(kDefaultOrderU, kDefaultOrderV) {}
    Jet2(int order_u, int order_v);

    static Jet2 constant(double c, int order_u = kDefaultOrderU, int order_v = kDefaultOrderV);
    static Jet2 variable_u(double u0, int order_u = kDefaultOrderU, int order_v = kDefaultOrderV);
    static Jet2 variable_v(double v0, int order_u = kDefaultOrderU, int order_v = kDefaultOrderV);

    int order_u() const noexcept { return du_; }
    int order_v() const noexcept { return dv_; }

    double coeff(int a, int b) const { return c_[index(a, b)]; }
    double& coeff(int a, int b) { return c_[index(a, b)]; }
    double value() const noexcept { return c_[0]; }

    /// The actual partial derivative d_u^a d_v^b f at the base point.
    double partial(int a, int b) const;

    bool is_constant() const noexcept;
    /// True when no coefficient with a >= 1 is nonzero.
    bool depends_only_on_v() const noexcept;
    bool depends_only_on_u() const noexcept;
    bool all_finite() const noexcept;

    /// Jets of the partial derivatives; the differentiated order drops by one.
    Jet2 d_du() const;
    Jet2 d_dv() const;
    Jet2 truncated(int order_u, int order_v) const;

    /// Evaluate the Taylor polynomial at an offset from the base point.
    double eval_offset(double du, double dv) const;

    std::span<const double> coefficients() const noexcept { return c_; }

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator*=(const Jet2& o);
    Jet2& operator/=(const Jet2& o);
    Jet2& operator+=(double c) { c_[0] += c; return *this; }
    Jet2& operator-=(double c) { c_[0] -= c; return *this; }
    Jet2& operator*=(double c);
    Jet2& operator/=(double c);

    friend bool operator==(const Jet2&, const Jet2&) = default;

private:
    int index(int a, int b) const { return a * (dv_ + 1) + b; }
    void require_same_shape(const Jet2& o) const;

    int du_;
    int dv_;
    std::vector<double> c_;
};

Jet2 operator-(const Jet2& a);
Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator+(Jet2 a, double c);
Jet2 operator+(double c, Jet2 a);
Jet2 operator-(Jet2 a, double c);
Jet2 operator-(double c, const Jet2& a);
Jet2 operator*(Jet2 a, double c);
Jet2 operator*(double c, Jet2 a);
Jet2 operator/(Jet2 a, double c);
Jet2 operator/(double c, const Jet2& a);

Jet2 reciprocal(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 pow(const Jet2& a, double r);
Jet2 pow(const Jet2& a, const Jet2& r);
Jet2 atan(const Jet2& a);

/// Integer powers are allowed on any base (negative exponents need a
/// nonzero constant term).
Jet2 ipow(const Jet2& a, long long k);

/// Highest power of a zero-constant-term jet that can be nonzero.
int nilpotency_degree(const Jet2& a);

/// Sum_{a,b} c(a,b) du^a dv^b where c is a bivariate Taylor expansion and du,
/// dv are jets (any type J) with zero constant term. Only powers up to
/// ka = min(c.order_u(), ku) and kb = min(c.order_v(), kv) are used.
template <class J>
J compose_bivariate(const Jet2& c, const J& du, const J& dv, int ku, int kv) {
    const int ka = ku < c.order_u() ? ku : c.order_u();
    const int kb = kv < c.order_v() ? kv : c.order_v();
    J result = du * 0.0;
    for (int a = ka; a >= 0; --a) {
        J inner = dv * 0.0;
        inner += c.coeff(a, kb);
        for (int b = kb; b-- > 0;) {
            inner = inner * dv;
            inner += c.coeff(a, b);
        }
        if (a == ka) {
            result = inner;
        } else {
            result = result * du;
            result += inner;
        }
    }
    return result;
}

}  // namespace finsler
