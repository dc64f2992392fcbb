#include "teq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace teq {

MuWeights MuWeights::make(std::vector<double> weights) {
    if (weights.empty()) throw std::invalid_argument("MuWeights: empty weight vector");
    bool any_positive = false;
    for (size_t j = 0; j < weights.size(); ++j) {
        if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
            throw std::invalid_argument("MuWeights: weights must be finite and non-negative");
        }
        if (j > 0 && weights[j] > weights[j - 1]) throw std::invalid_argument("MuWeights: weights must be non-increasing");
        any_positive = any_positive || weights[j] > 0.0;
    }
    if (!any_positive) throw std::invalid_argument("MuWeights: weights must not all be zero");
    return MuWeights(std::move(weights));
}

MuWeights MuWeights::max_weights(int r) {
    std::vector<double> w(static_cast<size_t>(std::max(r, 1)), 0.0);
    w[0] = 1.0;
    return MuWeights(std::move(w));
}

MuWeights MuWeights::sum_weights(int r) { return MuWeights(std::vector<double>(static_cast<size_t>(std::max(r, 1)), 1.0)); }

double mu_norm_of_angles(std::span<const double> angles, const MuWeights& mu) {
    std::vector<double> mags;
    mags.reserve(angles.size());
    for (double a : angles) mags.push_back(std::abs(a));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double total = 0.0;
    for (size_t j = 0; j < mags.size(); ++j) total += mu.at(j) * mags[j];
    return total;
}

double mu_norm(const ComplexMatrix& u, const MuWeights& mu, double tol) {
    const auto angles = eigenangles(u, tol);
    return mu_norm_of_angles(angles, mu);
}

double max_norm(const ComplexMatrix& u, double tol) { return mu_norm(u, MuWeights::max_weights(static_cast<int>(u.rows())), tol); }

double sum_norm(const ComplexMatrix& u, double tol) { return mu_norm(u, MuWeights::sum_weights(static_cast<int>(u.rows())), tol); }

double teur_min_time(const TeurParams& params, std::span<const double> energies, std::span<const Complex> amplitudes) {
    if (!(params.epsilon >= 0.0 && params.epsilon <= 1.0)) throw std::invalid_argument("teur: epsilon must lie in [0, 1]");
    if (!(params.a_const > 0.0) || !(params.hbar > 0.0)) throw std::invalid_argument("teur: A and hbar must be positive");
    if (energies.size() != amplitudes.size() || energies.empty()) {
        throw std::invalid_argument("teur: energies and amplitudes must be non-empty and of equal length");
    }
    double norm2 = 0.0;
    double weighted = 0.0;
    for (size_t j = 0; j < energies.size(); ++j) {
        const double w = std::norm(amplitudes[j]);
        norm2 += w;
        weighted += w * std::abs(energies[j]);
    }
    if (std::abs(norm2 - 1.0) > 1e-9) throw std::invalid_argument("teur: amplitudes are not normalized");
    if (!(weighted > 0.0)) throw std::invalid_argument("teur: mean absolute energy is zero");
    return (1.0 - std::sqrt(params.epsilon)) * params.hbar / (params.a_const * weighted);
}

}  // namespace teq
