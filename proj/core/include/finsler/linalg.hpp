#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace finsler {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Inverse of a symmetric positive-definite matrix; throws
/// MetricDegenerateError when it is not (Cholesky fails or not symmetric).
Matrix inverse_spd(const Matrix& a, double symmetry_tol = 1e-12);

/// Inverse of a general square matrix; throws MetricDegenerateError when
/// the pivoted LU reports it singular.
Matrix inverse_general(const Matrix& a);

inline std::span<const double> as_span(const Vector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

inline Vector to_vector(std::span<const double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

}  // namespace finsler
