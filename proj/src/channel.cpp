#include "teq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SVD>

namespace teq {

namespace {

constexpr double kRangeSlack = 1e-12;

double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

void require_unitary(const ComplexMatrix& u, double tol, const char* what) {
    if (!is_unitary(u, tol)) {
        throw std::invalid_argument(std::string(what) + ": matrix is not unitary (residual " +
                                    std::to_string(u.rows() == u.cols() ? unitarity_residual(u) : -1.0) + ")");
    }
}

}  // namespace

KrausChannel KrausChannel::validate(std::vector<ComplexMatrix> ops, double tol) {
    if (ops.empty()) throw std::invalid_argument("validate: at least one Kraus operator is required");
    const auto n = ops.front().rows();
    if (n < 2) throw std::invalid_argument("validate: system dimension must be at least 2");
    for (const auto& f : ops) {
        if (f.rows() != n || f.cols() != n) {
            throw std::invalid_argument("validate: dimension mismatch, every Kraus operator must be " +
                                        std::to_string(n) + "x" + std::to_string(n));
        }
        require_finite(f, "validate");
    }
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (const auto& f : ops) sum.noalias() += f.adjoint() * f;
    const double residual = (sum - ComplexMatrix::Identity(n, n)).norm();
    if (!(residual <= tol)) {
        throw std::invalid_argument("validate: trace-preserving condition violated (||sum F^dagger F - I||_F = " +
                                    std::to_string(residual) + ")");
    }
    return KrausChannel(std::move(ops), residual);
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) throw std::invalid_argument("apply: state dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& f : ops_) out.noalias() += f * rho * f.adjoint();
    return out;
}

DirectionVector DirectionVector::make(ComplexVector v, NormConstraint mode) {
    if (v.size() < 1) throw std::invalid_argument("DirectionVector: empty");
    const double nrm = v.norm();
    if (mode == NormConstraint::Ball && nrm > 1.0 + 1e-12) {
        throw std::invalid_argument("DirectionVector: norm exceeds 1 in ball mode");
    }
    if (mode == NormConstraint::Sphere && std::abs(nrm - 1.0) > 1e-12) {
        throw std::invalid_argument("DirectionVector: norm differs from 1 in sphere mode");
    }
    return DirectionVector{std::move(v), mode};
}

ComplexMatrix stack(const KrausChannel& c) {
    const int n = c.dim();
    ComplexMatrix g(static_cast<Eigen::Index>(c.count()) * n, n);
    for (int j = 0; j < c.count(); ++j) g.middleRows(static_cast<Eigen::Index>(j) * n, n) = c.op(j);
    return g;
}

KrausChannel pad_zero(const KrausChannel& c, int count) {
    if (count < c.count()) throw std::invalid_argument("pad_zero: cannot shrink a Kraus set");
    auto ops = c.ops();
    ops.resize(static_cast<size_t>(count), ComplexMatrix::Zero(c.dim(), c.dim()));
    return KrausChannel::validate(std::move(ops), std::max(kDefaultTol, c.residual()));
}

KrausChannel kraus_rotate(const KrausChannel& c, const ComplexMatrix& w, double tol) {
    require_unitary(w, tol, "kraus_rotate");
    const auto dp = static_cast<int>(w.rows());
    if (dp < c.count()) throw std::invalid_argument("kraus_rotate: rotation smaller than the Kraus set");
    const int n = c.dim();
    std::vector<ComplexMatrix> ops(static_cast<size_t>(dp), ComplexMatrix::Zero(n, n));
    for (int i = 0; i < dp; ++i) {
        for (int j = 0; j < c.count(); ++j) ops[static_cast<size_t>(i)] += w(i, j) * c.op(j);
    }
    return KrausChannel::validate(std::move(ops), std::max(tol, c.residual() + tol));
}

KrausChannel conjugate_first(const KrausChannel& c, const ComplexMatrix& q, double tol) {
    require_unitary(q, tol, "conjugate_first");
    if (q.rows() != c.dim()) throw std::invalid_argument("conjugate_first: conjugator dimension mismatch");
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<size_t>(c.count()));
    ops.push_back(q * c.op(0) * q.adjoint());
    for (int j = 1; j < c.count(); ++j) ops.push_back(c.op(j) * q.adjoint());
    return KrausChannel::validate(std::move(ops), std::max(tol, c.residual() + tol));
}

ComplexMatrix weyl(int n, int j, int k) {
    if (n < 1 || j < 0 || j >= n || k < 0 || k >= n) {
        throw std::invalid_argument("weyl: indices must satisfy 0 <= j, k < n");
    }
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (int col = 0; col < n; ++col) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((col * k) % n) / n;
        s((col + j) % n, col) = std::polar(1.0, phase);
    }
    return s;
}

KrausChannel depolarizing_quantum(int n, double q) {
    if (n < 2) throw std::invalid_argument("depolarizing_quantum: n must be at least 2");
    const double n2 = static_cast<double>(n) * n;
    const double q_min = -1.0 / (n2 - 1.0);
    if (!(q >= q_min - kRangeSlack && q <= 1.0 + kRangeSlack)) {
        throw std::invalid_argument("depolarizing_quantum: q must lie in [-1/(n^2-1), 1]");
    }
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<size_t>(n * n));
    ops.push_back(safe_sqrt(q + (1.0 - q) / n2) * ComplexMatrix::Identity(n, n));
    const double scale = safe_sqrt(1.0 - q) / n;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == 0 && k == 0) continue;
            ops.push_back(scale * weyl(n, j, k));
        }
    }
    return KrausChannel::validate(std::move(ops));
}

KrausChannel noisy_classical(int n, double q) {
    if (n < 2) throw std::invalid_argument("noisy_classical: n must be at least 2");
    const double q_min = -1.0 / (n - 1.0);
    if (!(q >= q_min - kRangeSlack && q <= 1.0 + kRangeSlack)) {
        throw std::invalid_argument("noisy_classical: q must lie in [-1/(n-1), 1]");
    }
    std::vector<ComplexMatrix> ops;
    ops.push_back(safe_sqrt(q + (1.0 - q) / n) * ComplexMatrix::Identity(n, n));
    const double scale = safe_sqrt((1.0 - q) / n);
    for (int j = 1; j < n; ++j) ops.push_back(scale * weyl(n, j, 0));
    return KrausChannel::validate(std::move(ops));
}

KrausChannel depolarizing_cascade(int n, double q, int k) {
    if (k < 1) throw std::invalid_argument("depolarizing_cascade: k must be at least 1");
    // Check the single-run channel first so an invalid q is reported as such.
    (void)depolarizing_quantum(n, q);
    return depolarizing_quantum(n, std::pow(q, k));
}

KrausChannel bit_flip(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("bit_flip: u must lie in [0, 1]");
    return KrausChannel::validate({std::sqrt(1.0 - u) * ComplexMatrix::Identity(2, 2), std::sqrt(u) * weyl(2, 1, 0)});
}

KrausChannel phase_flip(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("phase_flip: u must lie in [0, 1]");
    return KrausChannel::validate({std::sqrt(1.0 - u) * ComplexMatrix::Identity(2, 2), std::sqrt(u) * weyl(2, 0, 1)});
}

std::optional<ClassCWitness> classify_class_c(const KrausChannel& c, double tol,
                                              const std::optional<ComplexMatrix>& conjugator) {
    const KrausChannel rep = conjugator ? conjugate_first(c, *conjugator) : c;
    const int n = rep.dim();
    const ComplexMatrix& f1 = rep.op(0);
    const Complex scalar = f1.trace() / static_cast<double>(n);
    if ((f1 - scalar * ComplexMatrix::Identity(n, n)).norm() > tol) return std::nullopt;
    if (std::abs(scalar.imag()) > tol || scalar.real() < -tol) return std::nullopt;
    for (int j = 1; j < rep.count(); ++j) {
        if (std::abs(rep.op(j).trace()) > tol) return std::nullopt;
    }
    const double root = std::clamp(scalar.real(), 0.0, 1.0);
    return ClassCWitness{root * root, conjugator};
}

double trace_distance_delta(int n, double q) {
    if (n < 2) throw std::invalid_argument("trace_distance_delta: n must be at least 2");
    return (1.0 - q) * (n - 1.0) / n;
}

double q_from_delta(int n, double delta) {
    if (n < 2) throw std::invalid_argument("q_from_delta: n must be at least 2");
    return 1.0 - delta * n / (n - 1.0);
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw std::invalid_argument("trace_distance: shape mismatch");
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(rho - sigma);
    return 0.5 * svd.singularValues().sum();
}

KrausChannel random_channel(int n, int d, Rng& rng) {
    if (n < 2 || d < 1) throw std::invalid_argument("random_channel: need n >= 2 and d >= 1");
    const ComplexMatrix u = random_unitary(n * d, rng);
    std::vector<ComplexMatrix> ops;
    for (int j = 0; j < d; ++j) ops.push_back(u.block(static_cast<Eigen::Index>(j) * n, 0, n, n));
    return KrausChannel::validate(std::move(ops));
}

}  // namespace teq
