#include "finsler/taylor_poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "finsler/series.hpp"

namespace finsler {

namespace {

void enumerate_block(int n, int var, int remaining, MonomialBasis::Exponent& e,
                     std::vector<MonomialBasis::Exponent>& out) {
    if (var == n - 1) {
        e[var] = static_cast<std::uint8_t>(remaining);
        out.push_back(e);
        e[var] = 0;
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        e[var] = static_cast<std::uint8_t>(k);
        enumerate_block(n, var + 1, remaining - k, e, out);
    }
    e[var] = 0;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

MonomialBasis::MonomialBasis(int n, int degree) : n_(n), degree_(degree) {
    if (n < 1 || n > kMaxVars) throw InvalidArgument("MonomialBasis supports 1.." + std::to_string(kMaxVars) + " variables");
    if (degree < 0) throw InvalidArgument("MonomialBasis degree must be non-negative");
    Exponent e{};
    for (int d = 0; d <= degree; ++d) {
        enumerate_block(n, 0, d, e, exps_);
        block_end_.push_back(exps_.size());
    }
    degs_.resize(exps_.size());
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        int d = 0;
        for (int v = 0; v < n; ++v) d += exps_[i][v];
        degs_[i] = d;
    }
    std::map<Exponent, std::size_t> lookup;
    for (std::size_t i = 0; i < exps_.size(); ++i) lookup[exps_[i]] = i;
    for (std::size_t i = 0; i < exps_.size(); ++i)
        for (std::size_t j = 0; j < exps_.size(); ++j) {
            if (degs_[i] + degs_[j] > degree) continue;
            Exponent s{};
            for (int v = 0; v < n; ++v) s[v] = static_cast<std::uint8_t>(exps_[i][v] + exps_[j][v]);
            products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                 static_cast<std::uint32_t>(lookup.at(s))});
        }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int n, int degree) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, degree}];
    if (!slot) slot = std::make_shared<const MonomialBasis>(n, degree);
    return slot;
}

std::size_t MonomialBasis::index_of(const Exponent& e) const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d += e[v];
    if (d > degree_) throw InvalidArgument("monomial degree exceeds basis degree");
    const std::size_t begin = d == 0 ? 0 : block_end_[d - 1];
    for (std::size_t i = begin; i < block_end_[d]; ++i)
        if (std::equal(e.begin(), e.begin() + n_, exps_[i].begin())) return i;
    throw InvalidArgument("monomial not found in basis");
}

// ---------------------------------------------------------------------------

TaylorPoly::TaylorPoly(int n, int degree)
    : basis_(MonomialBasis::get(n, degree)), c_(basis_->size(), 0.0) {}

TaylorPoly TaylorPoly::constant(int n, int degree, double c) {
    TaylorPoly p(n, degree);
    p.c_[0] = c;
    return p;
}

TaylorPoly TaylorPoly::variable(int n, int degree, int var, double x0) {
    TaylorPoly p = constant(n, degree, x0);
    if (degree >= 1) {
        MonomialBasis::Exponent e{};
        e[var] = 1;
        p.c_[p.basis_->index_of(e)] = 1.0;
    }
    return p;
}

double TaylorPoly::partial(std::size_t i) const {
    const auto& e = basis_->exponent(i);
    double f = 1.0;
    for (int v = 0; v < vars(); ++v) f *= factorial(e[v]);
    return c_[i] * f;
}

TaylorPoly TaylorPoly::derivative(int var) const {
    TaylorPoly r(vars(), degree());
    const auto& b = *basis_;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& e = b.exponent(i);
        if (e[var] == 0 || c_[i] == 0.0) continue;
        auto lowered = e;
        lowered[var] = static_cast<std::uint8_t>(lowered[var] - 1);
        r.c_[b.index_of(lowered)] += e[var] * c_[i];
    }
    return r;
}

TaylorPoly TaylorPoly::truncated(int degree) const {
    TaylorPoly r(vars(), degree);
    const std::size_t m = std::min(r.c_.size(), c_.size());
    std::copy_n(c_.begin(), m, r.c_.begin());
    return r;
}

bool TaylorPoly::all_finite() const noexcept {
    return std::all_of(c_.begin(), c_.end(), [](double x) { return std::isfinite(x); });
}

void TaylorPoly::require_same_shape(const TaylorPoly& o) const {
    if (basis_ != o.basis_) throw InvalidArgument("TaylorPoly shape mismatch");
}

TaylorPoly& TaylorPoly::operator+=(const TaylorPoly& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

TaylorPoly& TaylorPoly::operator-=(const TaylorPoly& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

TaylorPoly& TaylorPoly::operator*=(double c) {
    for (double& x : c_) x *= c;
    return *this;
}

void TaylorPoly::multiply_add(const TaylorPoly& a, const TaylorPoly& b, TaylorPoly& out) {
    a.require_same_shape(b);
    a.require_same_shape(out);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* po = out.c_.data();
    for (const auto& p : a.basis_->products()) po[p.out] += pa[p.lhs] * pb[p.rhs];
}

TaylorPoly operator+(TaylorPoly a, const TaylorPoly& b) { return a += b; }
TaylorPoly operator-(TaylorPoly a, const TaylorPoly& b) { return a -= b; }
TaylorPoly operator-(const TaylorPoly& a) { return a * -1.0; }
TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
    TaylorPoly r(a.vars(), a.degree());
    TaylorPoly::multiply_add(a, b, r);
    return r;
}
TaylorPoly operator*(TaylorPoly a, double c) { return a *= c; }
TaylorPoly operator*(double c, TaylorPoly a) { return a *= c; }
TaylorPoly operator+(TaylorPoly a, double c) { return a += c; }
TaylorPoly operator-(TaylorPoly a, double c) { return a -= c; }

namespace {

template <class J>
J delta_of(const J& a) {
    J d = a;
    d -= a.value();
    return d;
}

}  // namespace

TaylorPoly reciprocal(const TaylorPoly& a) {
    const double x0 = a.value();
    if (x0 == 0.0 || !std::isfinite(x0)) throw SingularJetError("division by a jet with zero constant term");
    return series::compose_series<TaylorPoly>(series::reciprocal(x0, a.degree()), delta_of(a));
}

TaylorPoly operator/(const TaylorPoly& a, const TaylorPoly& b) { return a * reciprocal(b); }

TaylorPoly sqrt(const TaylorPoly& a) {
    const double x0 = a.value();
    if (!(x0 > 0.0)) throw DomainError("sqrt jet needs a positive base, got " + std::to_string(x0));
    return series::compose_series<TaylorPoly>(series::sqrt(x0, a.degree()), delta_of(a));
}

// ---------------------------------------------------------------------------

FieldJet::FieldJet(int n_y, int n_x, int degree) : base_(n_y, degree) {
    dx_.assign(static_cast<std::size_t>(n_x), TaylorPoly(n_y, degree));
}

FieldJet FieldJet::constant(int n_y, int n_x, int degree, double c) {
    FieldJet j(n_y, n_x, degree);
    j.base_ += c;
    return j;
}

FieldJet FieldJet::y_variable(int n_y, int n_x, int degree, int var, double y0) {
    FieldJet j(n_y, n_x, degree);
    j.base_ = TaylorPoly::variable(n_y, degree, var, y0);
    return j;
}

FieldJet FieldJet::x_variable(int n_y, int n_x, int degree, int var, double x0) {
    FieldJet j = constant(n_y, n_x, degree, x0);
    j.dx_[var] += 1.0;
    return j;
}

FieldJet FieldJet::x_affine(int n_y, int n_x, int degree, double value, std::span<const double> grad) {
    FieldJet j = constant(n_y, n_x, degree, value);
    for (int k = 0; k < n_x; ++k) j.dx_[k] += grad[k];
    return j;
}

bool FieldJet::all_finite() const noexcept {
    if (!base_.all_finite()) return false;
    return std::all_of(dx_.begin(), dx_.end(), [](const TaylorPoly& p) { return p.all_finite(); });
}

FieldJet& FieldJet::operator+=(const FieldJet& o) {
    base_ += o.base_;
    for (std::size_t k = 0; k < dx_.size(); ++k) dx_[k] += o.dx_[k];
    return *this;
}

FieldJet& FieldJet::operator-=(const FieldJet& o) {
    base_ -= o.base_;
    for (std::size_t k = 0; k < dx_.size(); ++k) dx_[k] -= o.dx_[k];
    return *this;
}

FieldJet& FieldJet::operator*=(double c) {
    base_ *= c;
    for (auto& p : dx_) p *= c;
    return *this;
}

FieldJet operator*(const FieldJet& a, const FieldJet& b) {
    if (a.dx_.size() != b.dx_.size()) throw InvalidArgument("FieldJet x-dimension mismatch");
    FieldJet r;
    r.base_ = a.base_ * b.base_;
    r.dx_.reserve(a.dx_.size());
    for (std::size_t k = 0; k < a.dx_.size(); ++k) {
        TaylorPoly p(a.y_vars(), a.degree());
        TaylorPoly::multiply_add(a.base_, b.dx_[k], p);
        TaylorPoly::multiply_add(a.dx_[k], b.base_, p);
        r.dx_.push_back(std::move(p));
    }
    return r;
}

FieldJet operator+(FieldJet a, const FieldJet& b) { return a += b; }
FieldJet operator-(FieldJet a, const FieldJet& b) { return a -= b; }
FieldJet operator-(const FieldJet& a) { return a * -1.0; }
FieldJet operator*(FieldJet a, double c) { return a *= c; }
FieldJet operator*(double c, FieldJet a) { return a *= c; }
FieldJet operator+(FieldJet a, double c) { return a += c; }
FieldJet operator-(FieldJet a, double c) { return a -= c; }

namespace {

int field_order(const FieldJet& a) { return a.x_vars() > 0 ? a.degree() + 1 : a.degree(); }

}  // namespace

FieldJet reciprocal(const FieldJet& a) {
    const double x0 = a.value();
    if (x0 == 0.0 || !std::isfinite(x0)) throw SingularJetError("division by a jet with zero constant term");
    return series::compose_series<FieldJet>(series::reciprocal(x0, field_order(a)), delta_of(a));
}

FieldJet operator/(const FieldJet& a, const FieldJet& b) { return a * reciprocal(b); }

FieldJet sqrt(const FieldJet& a) {
    const double x0 = a.value();
    if (!(x0 > 0.0)) throw DomainError("sqrt jet needs a positive base, got " + std::to_string(x0));
    return series::compose_series<FieldJet>(series::sqrt(x0, field_order(a)), delta_of(a));
}

FieldJet exp(const FieldJet& a) {
    return series::compose_series<FieldJet>(series::exp(a.value(), field_order(a)), delta_of(a));
}

FieldJet log(const FieldJet& a) {
    const double x0 = a.value();
    if (!(x0 > 0.0)) throw DomainError("log needs a positive argument, got " + std::to_string(x0));
    return series::compose_series<FieldJet>(series::log(x0, field_order(a)), delta_of(a));
}

FieldJet pow(const FieldJet& a, double r) {
    const double x0 = a.value();
    if (!(x0 > 0.0)) throw DomainError("non-integer power needs a positive base, got " + std::to_string(x0));
    return series::compose_series<FieldJet>(series::pow(x0, r, field_order(a)), delta_of(a));
}

}  // namespace finsler
