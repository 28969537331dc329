#pragma once

// Random smooth scalar fields f(x, y) written once for both double and
// FieldJet arithmetic, plus the finite-difference comparison used by the
// jet oracle tests.

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fd_oracle.hpp"
#include "finsler/field_derivatives.hpp"

namespace finsler::testing {

struct RandomField {
    int n = 2;
    int kind = 0;
    std::vector<double> A;   // n*n, near identity
    std::vector<double> B;   // n*n*n, x-dependence of A
    std::vector<double> w;   // y-linear
    std::vector<double> v;   // x-linear

    static RandomField make(int n, int kind, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        RandomField f;
        f.n = n;
        f.kind = kind;
        f.A.assign(static_cast<std::size_t>(n * n), 0.0);
        f.B.assign(static_cast<std::size_t>(n * n * n), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double a = (i == j ? 1.0 : 0.0) + 0.15 * u(rng);
                f.A[i * n + j] = f.A[j * n + i] = a;
                for (int k = 0; k < n; ++k) {
                    const double b = 0.1 * u(rng);
                    f.B[(i * n + j) * n + k] = f.B[(j * n + i) * n + k] = b;
                }
            }
        for (int i = 0; i < n; ++i) {
            f.w.push_back(0.5 * u(rng));
            f.v.push_back(0.5 * u(rng));
        }
        return f;
    }

    template <class T>
    T operator()(std::span<const T> x, std::span<const T> y) const {
        using std::exp;
        using std::sqrt;
        T q = y[0] * 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                T a = x[0] * 0.0 + A[i * n + j];
                for (int k = 0; k < n; ++k) a = a + x[k] * B[(i * n + j) * n + k];
                q = q + a * y[i] * y[j];
            }
        T lin = y[0] * 0.0;
        for (int i = 0; i < n; ++i) lin = lin + y[i] * w[i] + x[i] * v[i];
        switch (kind % 3) {
            case 0: return sqrt(q) * (lin * 0.3 + 1.0);
            case 1: return q * exp(lin * 0.2 / sqrt(q));
            default: return sqrt(q + lin * lin * 0.5) + exp(x[0] * lin * 0.1);
        }
    }

    double value(const std::vector<double>& x, const std::vector<double>& y) const {
        return (*this)(std::span<const double>(x), std::span<const double>(y));
    }

    JetField jet_field() const {
        return [f = *this](std::span<const FieldJet> x, std::span<const FieldJet> y) { return f(x, y); };
    }
};

struct OracleReport {
    double worst = 0.0;  // worst |jet - fd| / max(|fd|, floor)
    std::string where;
};

/// Compare every entry of field_derivatives(f) against finite differences.
/// Order 1 (and the first mixed order) is differenced from f itself, order 2
/// is additionally checked with nested differences of f, and order k >= 2 is
/// checked against a central difference of the order-(k-1) tensor, which is
/// anchored to f by induction.
inline OracleReport check_field_against_fd(const JetField& jf, const std::function<double(const std::vector<double>&,
                                                                                         const std::vector<double>&)>& f,
                                           const std::vector<double>& x, const std::vector<double>& y, int max_order,
                                           double h = 1e-4) {
    const int n = static_cast<int>(x.size());
    const FieldDerivatives d = field_derivatives(jf, x, y, true, max_order);
    OracleReport rep;
    auto note = [&](double got, double want, double scale, const std::string& where) {
        const double floor = std::max(1e-3 * scale, 1e-12);
        const double r = std::abs(got - want) / std::max(std::abs(want), floor);
        if (r > rep.worst || std::isnan(r)) {
            rep.worst = std::isnan(r) ? INFINITY : r;
            rep.where = where;
        }
    };
    auto inf_norm = [](const DerivTensor& t) {
        double m = 0.0;
        for (double e : t.values()) m = std::max(m, std::abs(e));
        return m;
    };

    note(d.value, f(x, y), std::abs(f(x, y)), "value");

    // shifted evaluations of the whole tensor stack
    auto shifted = [&](bool along_x, int dir) {
        return [&, along_x, dir](double t) {
            std::vector<double> xs = x, ys = y;
            (along_x ? xs : ys)[static_cast<std::size_t>(dir)] += t;
            const FieldDerivatives s = field_derivatives(jf, xs, ys, false, max_order);
            std::vector<double> flat;
            flat.push_back(s.value);
            for (int k = 1; k <= max_order; ++k)
                for (double e : s.dy[static_cast<std::size_t>(k)].values()) flat.push_back(e);
            return flat;
        };
    };
    std::vector<std::size_t> offset(static_cast<std::size_t>(max_order + 1), 0);
    offset[0] = 0;
    std::size_t acc = 1;
    for (int k = 1; k <= max_order; ++k) {
        offset[static_cast<std::size_t>(k)] = acc;
        acc += d.dy[static_cast<std::size_t>(k)].size();
    }

    for (int dir = 0; dir < n; ++dir) {
        const std::vector<double> dyd = fd_derivative_vec(shifted(false, dir), h);
        const std::vector<double> dxd = fd_derivative_vec(shifted(true, dir), h);
        for (int k = 1; k <= max_order; ++k) {
            const DerivTensor& t = d.dy[static_cast<std::size_t>(k)];
            const double scale = inf_norm(t);
            for (std::size_t e = 0; e < t.size(); ++e) {
                std::vector<int> idx = t.unflatten(e);
                if (idx[0] != dir) continue;
                std::size_t lower = 0;
                for (std::size_t p = 1; p < idx.size(); ++p) lower = lower * static_cast<std::size_t>(n) + idx[p];
                note(t.at_flat(e), dyd[offset[static_cast<std::size_t>(k - 1)] + lower], scale,
                     "dy[" + std::to_string(k) + "] flat " + std::to_string(e));
            }
        }
        for (int k = 0; k < max_order; ++k) {
            const DerivTensor& t = d.dxdy[static_cast<std::size_t>(k)];
            const double scale = inf_norm(t);
            for (std::size_t e = 0; e < t.size(); ++e) {
                std::vector<int> idx = t.unflatten(e);
                if (idx[0] != dir) continue;
                std::size_t rest = 0;
                for (std::size_t p = 1; p < idx.size(); ++p) rest = rest * static_cast<std::size_t>(n) + idx[p];
                note(t.at_flat(e), dxd[offset[static_cast<std::size_t>(k)] + rest], scale,
                     "dxdy[" + std::to_string(k) + "] flat " + std::to_string(e));
            }
        }
    }

    // independent second-order check straight from f
    if (max_order >= 2) {
        const std::function<double(const std::vector<double>&)> fy = [&](const std::vector<double>& yy) {
            return f(x, yy);
        };
        const DerivTensor& t = d.dy[2];
        const double scale = inf_norm(t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                note(t({i, j}), fd_partial2(fy, y, i, j), scale, "dy[2] nested fd");
    }
    return rep;
}

}  // namespace finsler::testing
