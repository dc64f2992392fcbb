#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teq/bounds.hpp"
#include "teq/channel.hpp"
#include "teq/matrix.hpp"

namespace teq {

struct OracleBudget {
    int restarts = 64;
    int max_evals = 5000;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

struct OracleResult {
    double value = 0.0;
    std::vector<double> argument;
    int evals = 0;
    std::uint64_t seed = 0;
};

/// Minimum of the flavor norm over unitaries with U a = b, searched directly over the
/// unitary group of the complement of a. Dimensions 2..4.
OracleResult brute_single_vector(const ComplexVector& a, const ComplexVector& b, Flavor flavor,
                                 const OracleBudget& budget = {16, 3000, 0, 1e-10});

/// Minimum of the flavor norm over all unitary extensions with d' ancilla levels,
/// U = (W (x) I)[G | G_perp V]. Requires n = 2 and d' >= d; d' is capped at 4.
OracleResult brute_channel(const KrausChannel& c, Flavor flavor, int d_prime, const OracleBudget& budget = {});

/// Minimum over completions V alone, with W = I: the partial-unitary problem for the Kraus set
/// exactly as presented.
OracleResult brute_completion(const KrausChannel& c, Flavor flavor, int d_prime, const OracleBudget& budget = {});

/// The unitary extension at an oracle argument, for replay and inspection.
ComplexMatrix brute_channel_unitary(const KrausChannel& c, int d_prime, const std::vector<double>& argument);

struct LemmaReport {
    std::string name;
    int trials = 0;
    int violations = 0;
    double max_residual = 0.0;
    std::optional<std::string> first_failure;

    bool passed() const { return violations == 0; }
};

/// Random polygons with 3 to 5 vertices reduced to a chord: target preserved to 1e-8 at
/// every step and the mu-norm never increases.
LemmaReport check_polygon_reduction(std::uint64_t seed, int trials);

/// Chords through r e^{i gamma}: subtended angle >= 2 acos r - 1e-9 over a direction sweep,
/// attained by the perpendicular chord within 1e-9.
LemmaReport check_chord_min_angle(std::uint64_t seed, int trials);

/// Random feasible chords: both entry constraints of the 2x2 construction hold to 1e-10 and
/// the constructed matrix equals its spectral form.
LemmaReport check_appendix_identity(std::uint64_t seed, int trials);

}  // namespace teq
