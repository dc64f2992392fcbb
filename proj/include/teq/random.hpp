#pragma once

#include <cstdint>
#include <random>

#include "teq/matrix.hpp"

namespace teq {

using Rng = std::mt19937_64;

/// Independent stream for (seed, index); used so restart i sees the same start point
/// regardless of how many restarts are requested.
Rng derived_rng(std::uint64_t seed, std::uint64_t index);

double uniform(Rng& rng, double lo, double hi);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(int n, Rng& rng);

/// Hermitian matrix with i.i.d. Gaussian entries, scaled so its spectral radius is `radius`.
ComplexMatrix random_hermitian(int n, Rng& rng, double radius);

ComplexVector random_unit_vector(int n, Rng& rng);

/// Full-rank density matrix G G^dagger / Tr.
ComplexMatrix random_density(int n, Rng& rng);

ComplexMatrix random_matrix(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0);

}  // namespace teq
