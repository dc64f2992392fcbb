#include "teq/random.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace teq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return g;
}

}  // namespace

Rng derived_rng(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ (index * 0xd1b54a32d192ed03ULL)));
}

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ComplexMatrix random_unitary(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(i) *= d / mag;
    }
    return q;
}

ComplexMatrix random_hermitian(int n, Rng& rng, double radius) {
    const ComplexMatrix g = ginibre(n, n, rng);
    ComplexMatrix h = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
    if (rho > 0.0) h *= radius / rho;
    return h;
}

ComplexVector random_unit_vector(int n, Rng& rng) {
    ComplexVector v = ginibre(n, 1, rng).col(0);
    return v / v.norm();
}

ComplexMatrix random_density(int n, Rng& rng) {
    const ComplexMatrix g = ginibre(n, n, rng);
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

ComplexMatrix random_matrix(int rows, int cols, Rng& rng, double lo, double hi) {
    ComplexMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = Complex(uniform(rng, lo, hi), uniform(rng, lo, hi));
    }
    return m;
}

}  // namespace teq
