#pragma once

#include <span>
#include <vector>

#include "teq/matrix.hpp"

namespace teq {

/// Non-increasing, non-negative, not-all-zero weight vector of the time-energy measure.
class MuWeights {
public:
    static MuWeights make(std::vector<double> weights);
    /// [1, 0, ..., 0]
    static MuWeights max_weights(int r);
    /// [1, 1, ..., 1]
    static MuWeights sum_weights(int r);

    const std::vector<double>& values() const { return weights_; }
    /// Weight j, zero beyond the stored length.
    double at(size_t j) const { return j < weights_.size() ? weights_[j] : 0.0; }

private:
    explicit MuWeights(std::vector<double> w) : weights_(std::move(w)) {}
    std::vector<double> weights_;
};

/// sum_j mu_j |theta_j| with the angles taken in non-increasing order of magnitude.
/// `angles` may be signed and in any order.
double mu_norm_of_angles(std::span<const double> angles, const MuWeights& mu);

/// Time-energy measure of a unitary. Weights shorter than the dimension are zero-padded;
/// longer ones are truncated.
double mu_norm(const ComplexMatrix& u, const MuWeights& mu, double tol = kDefaultTol);

/// Largest |eigenangle|.
double max_norm(const ComplexMatrix& u, double tol = kDefaultTol);

/// Sum of |eigenangles|.
double sum_norm(const ComplexMatrix& u, double tol = kDefaultTol);

struct TeurParams {
    double epsilon = 0.0;   // fidelity threshold in [0, 1]
    double a_const = 0.725;
    double hbar = 1.0;
};

/// Minimum evolution time (1 - sqrt(eps)) hbar / (A sum_j |alpha_j|^2 |E_j|).
double teur_min_time(const TeurParams& params, std::span<const double> energies,
                     std::span<const Complex> amplitudes);

}  // namespace teq
