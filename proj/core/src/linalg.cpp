#include "finsler/linalg.hpp"

#include "finsler/errors.hpp"

namespace finsler {

Matrix inverse_spd(const Matrix& a, double symmetry_tol) {
    if (a.rows() != a.cols() || a.rows() == 0) throw MetricDegenerateError("metric must be a non-empty square matrix");
    if (!a.allFinite()) throw MetricDegenerateError("metric has non-finite entries");
    const double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > symmetry_tol * (1.0 + scale))
        throw MetricDegenerateError("metric is not symmetric");
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw MetricDegenerateError("metric is not positive definite");
    Matrix inv = llt.solve(Matrix::Identity(a.rows(), a.cols()));
    return 0.5 * (inv + inv.transpose());
}

Matrix inverse_general(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw MetricDegenerateError("matrix must be non-empty and square");
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw MetricDegenerateError("matrix is singular");
    return lu.inverse();
}

}  // namespace finsler
