#pragma once

#include <optional>
#include <vector>

#include "teq/matrix.hpp"
#include "teq/random.hpp"

namespace teq {

/// A trace-preserving set of Kraus operators F_1..F_d acting on n-dimensional states.
/// Construction goes through `validate`, so every instance satisfies
/// ||sum_j F_j^dagger F_j - I||_F <= tol for the tolerance it was built with.
class KrausChannel {
public:
    static KrausChannel validate(std::vector<ComplexMatrix> ops, double tol = kDefaultTol);

    int dim() const { return static_cast<int>(ops_.front().rows()); }
    int count() const { return static_cast<int>(ops_.size()); }
    const std::vector<ComplexMatrix>& ops() const { return ops_; }
    const ComplexMatrix& op(int j) const { return ops_.at(static_cast<size_t>(j)); }
    double residual() const { return residual_; }

    /// rho -> sum_j F_j rho F_j^dagger
    ComplexMatrix apply(const ComplexMatrix& rho) const;

private:
    KrausChannel(std::vector<ComplexMatrix> ops, double residual) : ops_(std::move(ops)), residual_(residual) {}

    std::vector<ComplexMatrix> ops_;
    double residual_ = 0.0;
};

enum class NormConstraint { Ball, Sphere };

/// Complex weights v_1..v_d, restricted to the closed unit ball or the unit sphere.
struct DirectionVector {
    ComplexVector v;
    NormConstraint mode = NormConstraint::Ball;

    static DirectionVector make(ComplexVector v, NormConstraint mode);
};

/// Witness that a channel is presented in the form F_1 = sqrt(p) I, Tr F_j = 0 (j >= 2).
struct ClassCWitness {
    double p = 0.0;
    std::optional<ComplexMatrix> conjugator;
};

/// dn x n matrix with row blocks F_1..F_d; its columns are orthonormal.
ComplexMatrix stack(const KrausChannel& c);

/// Appends all-zero Kraus operators until the channel has `count` operators.
KrausChannel pad_zero(const KrausChannel& c, int count);

/// F'_i = sum_j w_ij F_j after zero-padding to w's size.
KrausChannel kraus_rotate(const KrausChannel& c, const ComplexMatrix& w, double tol = kDefaultTol);

/// (q F_1 q^dagger, F_2 q^dagger, ..., F_d q^dagger)
KrausChannel conjugate_first(const KrausChannel& c, const ComplexMatrix& q, double tol = kDefaultTol);

/// S_jk = sum_s omega^{sk} |s+j><s| with omega = exp(2 pi i / n).
ComplexMatrix weyl(int n, int j, int k);

/// q rho + (1-q) I/n written with n^2 Weyl Kraus operators; the identity terms are merged into F_1.
KrausChannel depolarizing_quantum(int n, double q);

/// q rho + (1-q)/n sum_j S_j0 rho S_j0^dagger (n Kraus operators).
KrausChannel noisy_classical(int n, double q);

/// depolarizing_quantum(n, q^k): the k-fold composition of the depolarizing map.
KrausChannel depolarizing_cascade(int n, double q, int k);

/// Qubit {sqrt(1-u) I, sqrt(u) X}.
KrausChannel bit_flip(double u);
/// Qubit {sqrt(1-u) I, sqrt(u) Z}.
KrausChannel phase_flip(double u);

/// Checks the presented representation (after an optional conjugate_first by `conjugator`).
std::optional<ClassCWitness> classify_class_c(const KrausChannel& c, double tol = kDefaultTol,
                                              const std::optional<ComplexMatrix>& conjugator = std::nullopt);

/// delta = (1-q)(n-1)/n, the trace distance a pure input travels under the noisy channels.
double trace_distance_delta(int n, double q);
double q_from_delta(int n, double delta);

/// Half the trace norm of rho - sigma.
double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Kraus set cut from a Haar-random isometry of size dn x n.
KrausChannel random_channel(int n, int d, Rng& rng);

}  // namespace teq
