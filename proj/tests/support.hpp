#pragma once

// Test-side references that avoid the library's eigen-solver and Schur paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace teq::testing {

using Cx = std::complex<double>;
using CxMat = Eigen::MatrixXcd;
using CxVec = Eigen::VectorXcd;

/// Monic characteristic polynomial coefficients c_0..c_n (c_n = 1) by Faddeev-LeVerrier.
inline std::vector<Cx> characteristic_polynomial(const CxMat& a) {
    const auto n = a.rows();
    std::vector<Cx> c(static_cast<size_t>(n) + 1, Cx(0.0));
    c[static_cast<size_t>(n)] = 1.0;
    CxMat m = CxMat::Zero(n, n);
    const CxMat id = CxMat::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<size_t>(n - k + 1)] * id;
        c[static_cast<size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

inline Cx horner(const std::vector<Cx>& c, Cx z) {
    Cx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

/// Roots of a monic polynomial by Durand-Kerner iteration followed by Newton polishing.
inline std::vector<Cx> polynomial_roots(const std::vector<Cx>& c) {
    const size_t n = c.size() - 1;
    double radius = 1.0;
    for (size_t i = 0; i < n; ++i) radius = std::max(radius, 1.0 + std::abs(c[i]));
    std::vector<Cx> z(n);
    const Cx seed(0.4, 0.9);
    for (size_t i = 0; i < n; ++i) z[i] = std::pow(seed, static_cast<double>(i)) * (0.5 * radius);
    for (int iter = 0; iter < 2000; ++iter) {
        double moved = 0.0;
        for (size_t i = 0; i < n; ++i) {
            Cx denom = 1.0;
            for (size_t j = 0; j < n; ++j) {
                if (j != i) denom *= z[i] - z[j];
            }
            if (std::abs(denom) < 1e-300) denom = 1e-300;
            const Cx step = horner(c, z[i]) / denom;
            z[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-15) break;
    }
    std::vector<Cx> dc(n);
    for (size_t i = 1; i <= n; ++i) dc[i - 1] = static_cast<double>(i) * c[i];
    for (auto& r : z) {
        for (int k = 0; k < 3; ++k) {
            const Cx d = horner(dc, r);
            if (std::abs(d) < 1e-12) break;
            r -= horner(c, r) / d;
        }
    }
    return z;
}

inline std::vector<Cx> reference_eigenvalues(const CxMat& a) { return polynomial_roots(characteristic_polynomial(a)); }

/// Largest distance in a greedy nearest-neighbour matching of two multisets.
inline double multiset_distance(std::vector<Cx> a, std::vector<Cx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& x : a) {
        auto best = b.begin();
        for (auto it = b.begin(); it != b.end(); ++it) {
            if (std::abs(*it - x) < std::abs(*best - x)) best = it;
        }
        worst = std::max(worst, std::abs(*best - x));
        b.erase(best);
    }
    return worst;
}

/// Eigenangle magnitudes of a unitary from the reference eigenvalues, non-increasing.
inline std::vector<double> reference_angles(const CxMat& u) {
    std::vector<double> out;
    for (auto l : reference_eigenvalues(u)) out.push_back(std::abs(std::arg(l)));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline double reference_max_angle(const CxMat& u) { return reference_angles(u).front(); }

inline double reference_sum_angle(const CxMat& u) {
    double s = 0.0;
    for (double a : reference_angles(u)) s += a;
    return s;
}

/// exp(i h) by scaling and squaring of the Taylor series.
inline CxMat taylor_exp_i(const CxMat& h) {
    const double nrm = h.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (nrm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const CxMat a = Cx(0.0, 1.0) * h / std::pow(2.0, squarings);
    CxMat term = CxMat::Identity(h.rows(), h.cols());
    CxMat sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Tr_ancilla of an (a*n) x (a*n) operator with the ancilla as the first tensor factor.
inline CxMat partial_trace_first(const CxMat& m, Eigen::Index ancilla, Eigen::Index n) {
    CxMat out = CxMat::Zero(n, n);
    for (Eigen::Index k = 0; k < ancilla; ++k) out += m.block(k * n, k * n, n, n);
    return out;
}

inline CxMat kron(const CxMat& a, const CxMat& b) {
    CxMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

}  // namespace teq::testing
