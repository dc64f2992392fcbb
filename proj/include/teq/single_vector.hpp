#pragma once

#include <optional>
#include <vector>

#include "teq/matrix.hpp"
#include "teq/measure.hpp"

namespace teq {

/// The inner product <a|b> of two unit vectors, |w| <= 1.
struct Overlap {
    Complex w;

    static Overlap make(Complex w);
    double r() const { return std::abs(w); }
    double gamma() const { return principal_angle(w); }
};

/// Two eigenangles whose chord on the unit circle passes through an overlap w, with the
/// mixing weight z (w = z e^{i theta1} + (1-z) e^{i theta2}) and the eigenvector phase
/// e^{ix} = i (-1)^s e^{-i (theta1+theta2)/2}.
struct ChordSolution {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double z = 0.0;
    double x = 0.0;
    int s = 0;
};

/// Minimal max time-energy of a unitary mapping a to b: acos(Re w).
double f_max(Overlap o);
/// 2 acos|w|, a lower bound on the minimal sum time-energy.
double f_sum_lower(Overlap o);
/// 2 acos(Re w), an upper bound on the minimal sum time-energy.
double f_sum_upper(Overlap o);

/// Mixing weight z of the chord (theta1, theta2) through w, or nullopt when w is not on the
/// chord (|Im z| > 1e-9 or z outside [-1e-9, 1 + 1e-9]). Returned z is clamped to [0, 1].
/// Throws when the endpoints coincide and w is not that point.
std::optional<double> chord_weight(double theta1, double theta2, Complex w);

/// Full chord parameters; throws if the chord does not pass through w.
ChordSolution chord_solution(double theta1, double theta2, Complex w);

/// Residuals of the two entry constraints of the 2x2 construction for `sol` at overlap w:
/// first |z e^{i theta1} + (1-z) e^{i theta2} - w|, second
/// |sqrt(z(1-z)) e^{ix}(e^{i theta1} - e^{i theta2}) - sqrt(1-|w|^2)|.
std::pair<double, double> chord_residuals(const ChordSolution& sol, Complex w);

/// 2x2 unitary in the basis {a, a_perp} with eigenvalues e^{i theta1}, e^{i theta2} and
/// first column (w, sqrt(1-|w|^2)).
ComplexMatrix build_tilde_u(Complex w, double theta1, double theta2);

/// Unit vector orthogonal to a in span{a, b}.
ComplexVector a_perp(const ComplexVector& a, const ComplexVector& b);

/// Unitary on C^r that maps a to b, acts as the 2x2 construction on span{a, b} and as the
/// identity elsewhere. When a and b are parallel up to phase the result is the pure phase
/// on a and the angles are ignored.
ComplexMatrix embed_full(const ComplexVector& a, const ComplexVector& b, double theta1, double theta2);

/// embed_full with theta1 = -theta2 = acos(Re <a|b>); its max time-energy is f_max(<a|b>).
ComplexMatrix optimal_max_unitary(const ComplexVector& a, const ComplexVector& b);

/// One vertex configuration visited while reducing a polygon to a chord.
struct PolygonState {
    std::vector<double> vertices;
    std::vector<double> weights;
    double target_residual = 0.0;  // |sum_j weight_j e^{i vertex_j} - target|
    double mu_value = 0.0;         // mu-norm of the vertex multiset
};

struct ChordReduction {
    ChordSolution solution;
    std::vector<PolygonState> states;  // states.front() is the input
    bool monotone = true;              // mu_value never increased between states
};

/// Removes one vertex per step (merging two adjacent same-sign vertices into one on the arc
/// between them, or dropping a weightless vertex) until two remain. Among the admissible
/// merged angles the one with the smallest magnitude is chosen. The mu-norm used for the
/// monotonicity record defaults to all-ones.
ChordReduction reduce_to_chord(const std::vector<double>& vertices, const std::vector<double>& weights, Complex target,
                               const std::optional<MuWeights>& mu = std::nullopt);

/// 2 acos(r): smallest angle at the origin subtended by a chord through a point at radius r.
double chord_min_angle(double r);

/// Angle at the origin subtended by the chord through `point` (|point| <= 1) with direction
/// angle `direction`.
double chord_subtended_angle(Complex point, double direction);

}  // namespace teq
