#pragma once

#include <functional>
#include <span>
#include <vector>

#include "finsler/taylor_poly.hpp"

namespace finsler {

/// Dense rank-r tensor over an n-dimensional index range, row-major.
class DerivTensor {
public:
    DerivTensor() = default;
    DerivTensor(int n, int rank);

    int dim() const noexcept { return n_; }
    int rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return v_.size(); }

    double operator()(std::span<const int> idx) const { return v_[flat(idx)]; }
    double& operator()(std::span<const int> idx) { return v_[flat(idx)]; }
    double operator()(std::initializer_list<int> idx) const {
        return (*this)(std::span<const int>(idx.begin(), idx.size()));
    }
    double at_flat(std::size_t i) const { return v_[i]; }
    double& at_flat(std::size_t i) { return v_[i]; }
    /// Multi-index of a flat position.
    std::vector<int> unflatten(std::size_t i) const;

    std::span<const double> values() const noexcept { return v_; }

private:
    std::size_t flat(std::span<const int> idx) const;

    int n_ = 0;
    int rank_ = 0;
    std::vector<double> v_;
};

/// Derivatives of a scalar field f(x, y) at a point.
///
/// dy[k] holds the order-k pure y-partials (dy[0] is the rank-0 value);
/// dxdy[k] holds d_{x^m} d_{y^{i1}} ... d_{y^{ik}} f with m as the first
/// index. dxdy is empty when x-derivatives were not requested.
struct FieldDerivatives {
    int n = 0;
    double value = 0.0;
    std::vector<DerivTensor> dy;
    std::vector<DerivTensor> dxdy;
};

/// A scalar field written in jet arithmetic: receives the coordinate jets
/// x[0..n) and y[0..n) and returns f(x, y).
using JetField = std::function<FieldJet(std::span<const FieldJet> x, std::span<const FieldJet> y)>;

/// Jets for the coordinates at (x, y): y-variables to `degree`, x-variables
/// to first order when `need_x`.
struct CoordinateJets {
    std::vector<FieldJet> x;
    std::vector<FieldJet> y;
};
CoordinateJets coordinate_jets(std::span<const double> x, std::span<const double> y, bool need_x, int degree);

/// Pure y-partials to `max_order` and, when need_x, mixed d_x d_y^k to
/// k = max_order - 1, extracted from one multivariate jet evaluation.
/// Throws EvaluationError naming the first non-finite entry.
FieldDerivatives field_derivatives(const JetField& f, std::span<const double> x, std::span<const double> y,
                                   bool need_x, int max_order = 5);

/// Expand a jet into tensors (used by field_derivatives and the Douglas
/// pipeline).
FieldDerivatives extract_derivatives(const FieldJet& jet, int max_order);

}  // namespace finsler
