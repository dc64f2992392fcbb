#include "teq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace teq {

bool precedes(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

namespace {

Eigen::ComplexSchur<ComplexMatrix> run_schur(const ComplexMatrix& m, bool compute_u) {
    Eigen::ComplexSchur<ComplexMatrix> cs(m.rows());
    cs.compute(m, compute_u);
    if (cs.info() != Eigen::Success) throw NumericalError("complex Schur iteration did not converge");
    return cs;
}

// Swap adjacent diagonal entries k, k+1 of upper-triangular t with a Givens rotation.
void swap_diagonal(ComplexMatrix& t, ComplexMatrix& q, Eigen::Index k) {
    const Complex a = t(k, k);
    const Complex b = t(k + 1, k + 1);
    const Complex c = t(k, k + 1);
    const Complex x1 = c;
    const Complex x2 = b - a;
    const double nrm = std::hypot(std::abs(x1), std::abs(x2));
    if (nrm == 0.0) return;
    Eigen::Matrix2cd g;
    g << x1 / nrm, -std::conj(x2) / nrm, x2 / nrm, std::conj(x1) / nrm;
    t.middleRows(k, 2) = (g.adjoint() * t.middleRows(k, 2)).eval();
    t.middleCols(k, 2) = (t.middleCols(k, 2) * g).eval();
    q.middleCols(k, 2) = (q.middleCols(k, 2) * g).eval();
    t(k, k) = b;
    t(k + 1, k + 1) = a;
    t(k + 1, k) = 0.0;
}

}  // namespace

std::vector<Complex> spectrum(const ComplexMatrix& m) {
    require_square(m, "spectrum");
    require_finite(m, "spectrum");
    const auto cs = run_schur(m, false);
    std::vector<Complex> values(cs.matrixT().diagonal().begin(), cs.matrixT().diagonal().end());
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite eigenvalue");
    }
    std::sort(values.begin(), values.end(), precedes);
    return values;
}

EigenDecomposition eigen_decompose(const ComplexMatrix& m, bool with_vectors) {
    require_square(m, "eigen_decompose");
    require_finite(m, "eigen_decompose");
    if (!with_vectors) return {spectrum(m), std::nullopt};

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigen solver did not converge");
    const auto n = m.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
    const auto& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return precedes(vals(i), vals(j)); });

    EigenDecomposition out;
    ComplexMatrix vecs(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto src = order[static_cast<size_t>(c)];
        out.eigenvalues.push_back(vals(src));
        vecs.col(c) = solver.eigenvectors().col(src);
    }
    out.eigenvectors = std::move(vecs);
    return out;
}

SchurForm schur(const ComplexMatrix& m) {
    require_square(m, "schur");
    require_finite(m, "schur");
    const auto cs = run_schur(m, true);
    SchurForm out{cs.matrixU(), cs.matrixT()};
    out.t.triangularView<Eigen::StrictlyLower>().setZero();

    // Bubble sort of the diagonal; each swap is a unitary similarity.
    const auto n = m.rows();
    for (Eigen::Index pass = 0; pass < n; ++pass) {
        bool swapped = false;
        for (Eigen::Index k = 0; k + 1 < n - pass; ++k) {
            if (precedes(out.t(k + 1, k + 1), out.t(k, k))) {
                swap_diagonal(out.t, out.q, k);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    return out;
}

double principal_angle(Complex z) {
    if (z == Complex(0.0, 0.0)) throw std::invalid_argument("principal_angle: zero has no argument");
    const double theta = std::atan2(z.imag(), z.real());
    if (theta <= -std::numbers::pi + 1e-12) return std::numbers::pi;
    return theta;
}

double unitarity_residual(const ComplexMatrix& u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
    return u.rows() == u.cols() && u.allFinite() && unitarity_residual(u) <= tol;
}

std::vector<double> eigenangles(const ComplexMatrix& u, double tol) {
    require_square(u, "eigenangles");
    if (!is_unitary(u, tol)) {
        throw std::invalid_argument("eigenangles: matrix is not unitary (residual " +
                                    std::to_string(unitarity_residual(u)) + ")");
    }
    std::vector<double> angles;
    angles.reserve(static_cast<size_t>(u.rows()));
    for (const auto& lambda : spectrum(u)) angles.push_back(std::abs(principal_angle(lambda)));
    std::sort(angles.begin(), angles.end(), std::greater<>());
    return angles;
}

bool is_normal(const ComplexMatrix& m, double rel_tol) {
    const double scale = m.squaredNorm();
    if (scale == 0.0) return true;
    return (m * m.adjoint() - m.adjoint() * m).norm() < rel_tol * scale;
}

ComplexMatrix hermitian_from_params(std::span<const double> params, int k) {
    if (static_cast<int>(params.size()) != k * k) {
        throw std::invalid_argument("hermitian_from_params: expected k*k parameters");
    }
    ComplexMatrix h = ComplexMatrix::Zero(k, k);
    size_t idx = 0;
    for (int i = 0; i < k; ++i) h(i, i) = params[idx++];
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const Complex z(params[idx], params[idx + 1]);
            idx += 2;
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
    require_square(h, "exp_i_hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    const Eigen::VectorXcd phases = (Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix complete_to_unitary(const ComplexVector& first) {
    const auto r = first.size();
    if (r < 1) throw std::invalid_argument("complete_to_unitary: empty vector");
    if (std::abs(first.norm() - 1.0) > 1e-9) throw std::invalid_argument("complete_to_unitary: vector is not unit norm");
    ComplexMatrix out(r, r);
    out.col(0) = first / first.norm();
    Eigen::Index filled = 1;
    for (Eigen::Index k = 0; k < r && filled < r; ++k) {
        ComplexVector cand = ComplexVector::Unit(r, k);
        for (int pass = 0; pass < 2; ++pass) {
            cand -= out.leftCols(filled) * (out.leftCols(filled).adjoint() * cand);
        }
        const double nrm = cand.norm();
        if (nrm < 1e-7) continue;
        out.col(filled++) = cand / nrm;
    }
    if (filled != r) throw NumericalError("complete_to_unitary: Gram-Schmidt lost rank");
    return out;
}

ComplexMatrix orthogonal_complement(const ComplexMatrix& g) {
    const auto rows = g.rows();
    const auto cols = g.cols();
    if (cols > rows) throw std::invalid_argument("orthogonal_complement: more columns than rows");
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, rows);
    return q.rightCols(rows - cols);
}

}  // namespace teq
