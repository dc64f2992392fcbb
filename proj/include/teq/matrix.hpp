#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace teq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Tolerance for structural checks (unitarity, triangularity, trace preservation).
inline constexpr double kDefaultTol = 1e-10;

/// Raised when an iterative routine fails to converge or produces non-finite output.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenDecomposition {
    std::vector<Complex> eigenvalues;
    std::optional<ComplexMatrix> eigenvectors;  // columns, same order as eigenvalues
};

/// Unitary q and upper-triangular t with m = q t q^dagger.
struct SchurForm {
    ComplexMatrix q;
    ComplexMatrix t;
};

/// Ordering used for every reported spectrum: descending real part, then descending imaginary part.
bool precedes(Complex a, Complex b);

void require_square(const ComplexMatrix& m, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);

/// Eigenvalues with multiplicity, sorted by `precedes`.
std::vector<Complex> spectrum(const ComplexMatrix& m);

EigenDecomposition eigen_decompose(const ComplexMatrix& m, bool with_vectors = true);

/// Complex Schur form with the diagonal of t sorted by `precedes`.
SchurForm schur(const ComplexMatrix& m);

/// Argument of z in (-pi, pi]; values within 1e-12 of -pi map to +pi.
double principal_angle(Complex z);

/// |theta_j| of a unitary, sorted non-increasingly. Throws std::invalid_argument if u is
/// not unitary within tol (Frobenius residual of u^dagger u - I).
std::vector<double> eigenangles(const ComplexMatrix& u, double tol = kDefaultTol);

double unitarity_residual(const ComplexMatrix& u);
bool is_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

/// ||m m^dagger - m^dagger m||_F <= rel_tol * ||m||_F^2.
bool is_normal(const ComplexMatrix& m, double rel_tol = 1e-8);

/// Hermitian matrix from k*k reals: k diagonal entries followed by (re, im) pairs of the
/// strict upper triangle, row by row.
ComplexMatrix hermitian_from_params(std::span<const double> params, int k);

/// exp(i h) for Hermitian h, computed spectrally so the result is unitary to rounding.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h);

/// Unitary completion whose first column is `first` (a unit vector); the remaining
/// columns come from Gram-Schmidt on the standard basis in index order.
ComplexMatrix complete_to_unitary(const ComplexVector& first);

/// Orthonormal basis of the orthogonal complement of the column span of an isometry g.
ComplexMatrix orthogonal_complement(const ComplexMatrix& g);

}  // namespace teq
