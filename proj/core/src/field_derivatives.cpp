#include "finsler/field_derivatives.hpp"

#include <cmath>
#include <string>

namespace finsler {

DerivTensor::DerivTensor(int n, int rank) : n_(n), rank_(rank) {
    std::size_t sz = 1;
    for (int r = 0; r < rank; ++r) sz *= static_cast<std::size_t>(n);
    v_.assign(sz, 0.0);
}

std::size_t DerivTensor::flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int i : idx) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    return f;
}

std::vector<int> DerivTensor::unflatten(std::size_t i) const {
    std::vector<int> idx(static_cast<std::size_t>(rank_));
    for (int r = rank_ - 1; r >= 0; --r) {
        idx[r] = static_cast<int>(i % static_cast<std::size_t>(n_));
        i /= static_cast<std::size_t>(n_);
    }
    return idx;
}

CoordinateJets coordinate_jets(std::span<const double> x, std::span<const double> y, bool need_x, int degree) {
    const int n = static_cast<int>(y.size());
    const int nx = need_x ? static_cast<int>(x.size()) : 0;
    CoordinateJets c;
    for (int k = 0; k < static_cast<int>(x.size()); ++k)
        c.x.push_back(need_x ? FieldJet::x_variable(n, nx, degree, k, x[k])
                             : FieldJet::constant(n, nx, degree, x[k]));
    for (int k = 0; k < n; ++k) c.y.push_back(FieldJet::y_variable(n, nx, degree, k, y[k]));
    return c;
}

namespace {

// Fill a tensor slice from a polynomial: every index tuple of length k maps
// to the monomial counting its indices.
void fill_from_poly(const TaylorPoly& p, int k, DerivTensor& t, std::size_t offset, std::size_t block) {
    const int n = p.vars();
    const auto& basis = p.basis();
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (std::size_t f = 0; f < block; ++f) {
        std::size_t rem = f;
        MonomialBasis::Exponent e{};
        for (int r = k - 1; r >= 0; --r) {
            idx[r] = static_cast<int>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            ++e[idx[r]];
        }
        t.at_flat(offset + f) = p.partial(basis.index_of(e));
    }
}

std::string index_label(const char* name, int k, const DerivTensor& t, std::size_t flat) {
    std::string s = std::string(name) + "[" + std::to_string(k) + "](";
    const auto idx = t.unflatten(flat);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(idx[i]);
    }
    return s + ")";
}

}  // namespace

FieldDerivatives extract_derivatives(const FieldJet& jet, int max_order) {
    const int n = jet.y_vars();
    if (max_order > jet.degree()) throw InvalidArgument("jet degree below requested derivative order");
    FieldDerivatives d;
    d.n = n;
    d.value = jet.value();
    for (int k = 0; k <= max_order; ++k) {
        DerivTensor t(n, k);
        fill_from_poly(jet.base(), k, t, 0, t.size());
        for (std::size_t f = 0; f < t.size(); ++f)
            if (!std::isfinite(t.at_flat(f)))
                throw EvaluationError("non-finite derivative", index_label("dy", k, t, f));
        d.dy.push_back(std::move(t));
    }
    if (jet.x_vars() > 0) {
        for (int k = 0; k < max_order; ++k) {
            DerivTensor t(n, k + 1);
            std::size_t block = t.size() / static_cast<std::size_t>(n);
            for (int m = 0; m < jet.x_vars(); ++m) fill_from_poly(jet.dx(m), k, t, m * block, block);
            for (std::size_t f = 0; f < t.size(); ++f)
                if (!std::isfinite(t.at_flat(f)))
                    throw EvaluationError("non-finite derivative", index_label("dxdy", k, t, f));
            d.dxdy.push_back(std::move(t));
        }
    }
    return d;
}

FieldDerivatives field_derivatives(const JetField& f, std::span<const double> x, std::span<const double> y,
                                   bool need_x, int max_order) {
    if (x.size() != y.size()) throw InvalidArgument("x and y must have the same dimension");
    bool y_zero = true;
    for (double v : y) y_zero = y_zero && v == 0.0;
    if (y_zero) throw InvalidArgument("y must be nonzero");
    const auto coords = coordinate_jets(x, y, need_x, max_order);
    const FieldJet value = f(coords.x, coords.y);
    return extract_derivatives(value, max_order);
}

}  // namespace finsler
