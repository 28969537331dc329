#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "finsler/chart.hpp"
#include "finsler/expr.hpp"
#include "finsler/gab.hpp"
#include "finsler/sampler.hpp"

namespace finsler {

/// D^i_{jkl} at a point (x, y), row-major in (i, j, k, l).
class DouglasTensor {
public:
    DouglasTensor() = default;
    explicit DouglasTensor(int n) : n_(n), v_(static_cast<std::size_t>(n * n * n * n), 0.0) {}

    int dim() const noexcept { return n_; }
    double operator()(int i, int j, int k, int l) const { return v_[flat(i, j, k, l)]; }
    double& operator()(int i, int j, int k, int l) { return v_[flat(i, j, k, l)]; }
    const std::vector<double>& values() const noexcept { return v_; }

    double frobenius() const;
    double max_abs() const;

    Vector x;
    Vector y;
    /// Frobenius norm of d^3 G / dy^3 (filled by the generic route, else NaN).
    double spray_scale = std::numeric_limits<double>::quiet_NaN();

private:
    std::size_t flat(int i, int j, int k, int l) const {
        return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
    }
    int n_ = 0;
    std::vector<double> v_;
};

/// Residuals of the structural identities, each divided by (1 + max|D|).
struct TensorInvariants {
    double symmetry = 0.0;     // max over permutations of (j, k, l)
    double contraction = 0.0;  // max |D^i_{jkl} y^l|
    double trace = 0.0;        // max |D^m_{jkm}|
};
TensorInvariants tensor_invariants(const DouglasTensor& d);

/// Relative difference between D(x, lambda y) and D(x, y) / lambda.
double homogeneity_defect(const DouglasTensor& at_y, const DouglasTensor& at_lambda_y, double lambda);

/// Douglas tensor by differentiating the whole spray pipeline in jets:
/// F^2 -> g_ij -> g^ij -> G^i -> W^i -> d^3 W. Works for any beta.
DouglasTensor douglas_generic(const ChartPoint& p, const PhiSpec& phi, const Vector& y);
DouglasTensor douglas_generic(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y);

/// Closed-form Douglas tensor of a metric whose beta satisfies
/// b_{i|j} = c a_ij.
DouglasTensor douglas_closed_form(const ChartPoint& p, const PhiSpec& phi, const Vector& y, double c);
DouglasTensor douglas_closed_form(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y,
                                  double c);
/// Same, computing c and throwing NotConformalError if beta is not conformal.
DouglasTensor douglas_closed_form(const RiemannChart& chart, const PhiSpec& phi, const Vector& x, const Vector& y);

/// ||D||_F / (1 + ||d^3 G||_F) of a generic-route tensor.
double douglas_norm(const DouglasTensor& d);

struct DouglasCondition {
    double residual = 0.0;  // H_2 - s H_22
    double f = 0.0;         // implied by H = (f + g s^2) / 2 at this (b^2, s)
    double g = 0.0;
};
DouglasCondition douglas_condition(const PhiSpec& phi, double b2, double s);

/// LHS - RHS of  phi_22 - 2(phi_1 - s phi_12) = (f + g s^2)(phi - s phi_2 + (b^2 - s^2) phi_22).
double pde_residual(const PhiSpec& phi, const expr::Expr& f, const expr::Expr& g, double b2, double s);

struct DouglasVerdict {
    bool douglas = false;
    bool trivial = false;  // beta parallel (c = 0) at every sample
    double worst_norm = 0.0;
    Sample worst;
    int samples = 0;
    std::vector<double> norms;  // per sample, in draw order
};

/// Draws `count` samples and evaluates the generic route on each; the
/// evaluation may be spread over `threads` workers (the reduction is ordered).
DouglasVerdict is_douglas(const RiemannChart& chart, const PhiSpec& phi, int count, std::uint64_t seed, double tol,
                          const SamplerOptions& options = {}, int threads = 1);

/// Run fn(i) for i in [0, count) on up to `threads` workers; exceptions are
/// rethrown in index order.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace finsler
