#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

/// Graded enumeration of monomials in n variables up to total degree D.
///
/// Monomials of degree d occupy a contiguous block, blocks are ordered by
/// degree and the enumeration inside a block does not depend on D, so the
/// basis for a lower degree is a prefix of the basis for a higher one.
class MonomialBasis {
public:
    static constexpr int kMaxVars = 8;
    using Exponent = std::array<std::uint8_t, kMaxVars>;

    struct Product {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };

    /// Shared, cached instance (thread-safe).
    static std::shared_ptr<const MonomialBasis> get(int n, int degree);

    int vars() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return exps_.size(); }

    const Exponent& exponent(std::size_t i) const { return exps_[i]; }
    int total_degree(std::size_t i) const { return degs_[i]; }
    /// Number of monomials of degree <= d.
    std::size_t prefix_size(int d) const { return block_end_[d]; }
    /// Index of an exponent vector; throws if its degree exceeds D.
    std::size_t index_of(const Exponent& e) const;

    std::span<const Product> products() const noexcept { return products_; }

    MonomialBasis(int n, int degree);

private:
    int n_;
    int degree_;
    std::vector<Exponent> exps_;
    std::vector<int> degs_;
    std::vector<std::size_t> block_end_;
    std::vector<Product> products_;
};

/// Truncated Taylor expansion in n variables around a base point, total
/// degree <= D, normalized coefficients (d^m f / m!).
class TaylorPoly {
public:
    TaylorPoly() = default;
    TaylorPoly(int n, int degree);

    static TaylorPoly constant(int n, int degree, double c);
    /// The coordinate function x_var expanded at x0.
    static TaylorPoly variable(int n, int degree, int var, double x0);

    int vars() const noexcept { return basis_->vars(); }
    int degree() const noexcept { return basis_->degree(); }
    const MonomialBasis& basis() const noexcept { return *basis_; }

    double value() const noexcept { return c_[0]; }
    double coeff(std::size_t i) const { return c_[i]; }
    double& coeff(std::size_t i) { return c_[i]; }
    std::span<const double> coefficients() const noexcept { return c_; }

    /// Actual partial derivative for the monomial at index i (coeff * m!).
    double partial(std::size_t i) const;

    /// Expansion of d f / d x_var; exact up to degree D - 1.
    TaylorPoly derivative(int var) const;
    TaylorPoly truncated(int degree) const;
    bool all_finite() const noexcept;

    TaylorPoly& operator+=(const TaylorPoly& o);
    TaylorPoly& operator-=(const TaylorPoly& o);
    TaylorPoly& operator+=(double c) { c_[0] += c; return *this; }
    TaylorPoly& operator-=(double c) { c_[0] -= c; return *this; }
    TaylorPoly& operator*=(double c);

    /// out += a * b (truncated); out must share the basis.
    static void multiply_add(const TaylorPoly& a, const TaylorPoly& b, TaylorPoly& out);

private:
    void require_same_shape(const TaylorPoly& o) const;

    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<double> c_;
};

TaylorPoly operator+(TaylorPoly a, const TaylorPoly& b);
TaylorPoly operator-(TaylorPoly a, const TaylorPoly& b);
TaylorPoly operator-(const TaylorPoly& a);
TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b);
TaylorPoly operator*(TaylorPoly a, double c);
TaylorPoly operator*(double c, TaylorPoly a);
TaylorPoly operator+(TaylorPoly a, double c);
TaylorPoly operator-(TaylorPoly a, double c);

TaylorPoly reciprocal(const TaylorPoly& a);
TaylorPoly operator/(const TaylorPoly& a, const TaylorPoly& b);
TaylorPoly sqrt(const TaylorPoly& a);

/// Jet of a scalar field f(x0 + dx, y0 + dy) truncated to first order in dx
/// and total degree D in dy:  base(dy) + sum_k dx_k * dx_part[k](dy).
///
/// The dx parts are kept at degree D, so a pure-y block of degree D comes
/// with mixed (1, D) information.
class FieldJet {
public:
    FieldJet() = default;
    /// n_y variables for dy, n_x first-order x directions (0 to skip them).
    FieldJet(int n_y, int n_x, int degree);

    static FieldJet constant(int n_y, int n_x, int degree, double c);
    static FieldJet y_variable(int n_y, int n_x, int degree, int var, double y0);
    static FieldJet x_variable(int n_y, int n_x, int degree, int var, double x0);
    /// value + sum_k grad[k] dx_k, constant in y.
    static FieldJet x_affine(int n_y, int n_x, int degree, double value, std::span<const double> grad);

    int y_vars() const noexcept { return base_.vars(); }
    int x_vars() const noexcept { return static_cast<int>(dx_.size()); }
    int degree() const noexcept { return base_.degree(); }
    double value() const noexcept { return base_.value(); }

    const TaylorPoly& base() const noexcept { return base_; }
    TaylorPoly& base() noexcept { return base_; }
    const TaylorPoly& dx(int k) const { return dx_[k]; }
    TaylorPoly& dx(int k) { return dx_[k]; }

    bool all_finite() const noexcept;

    FieldJet& operator+=(const FieldJet& o);
    FieldJet& operator-=(const FieldJet& o);
    FieldJet& operator+=(double c) { base_ += c; return *this; }
    FieldJet& operator-=(double c) { base_ -= c; return *this; }
    FieldJet& operator*=(double c);

    friend FieldJet operator*(const FieldJet& a, const FieldJet& b);

private:
    TaylorPoly base_;
    std::vector<TaylorPoly> dx_;
};

FieldJet operator+(FieldJet a, const FieldJet& b);
FieldJet operator-(FieldJet a, const FieldJet& b);
FieldJet operator-(const FieldJet& a);
FieldJet operator*(FieldJet a, double c);
FieldJet operator*(double c, FieldJet a);
FieldJet operator+(FieldJet a, double c);
FieldJet operator-(FieldJet a, double c);

FieldJet reciprocal(const FieldJet& a);
FieldJet operator/(const FieldJet& a, const FieldJet& b);
FieldJet sqrt(const FieldJet& a);
FieldJet exp(const FieldJet& a);
FieldJet log(const FieldJet& a);
FieldJet pow(const FieldJet& a, double r);

}  // namespace finsler
