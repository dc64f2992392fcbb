#pragma once

#include <optional>
#include <string>
#include <vector>

#include "teq/channel.hpp"
#include "teq/matrix.hpp"
#include "teq/optimizer.hpp"

namespace teq {

enum class Flavor { Max, Sum };

const char* flavor_name(Flavor f);

/// acos with the argument clipped to [-1, 1].
double clipped_acos(double x);

/// Eigenvalues of sum_j v_j F_j.
std::vector<Complex> objective_eigenvalues(const KrausChannel& c, const DirectionVector& v);

struct SearchDiagnostics {
    int starts = 0;
    int evaluations = 0;
    int converged_starts = 0;
    double worst_diameter = 0.0;
};

struct BoundValue {
    double value = 0.0;
    DirectionVector v;
    bool tightened = false;  // normal-case max_i acos Re(lambda_i) was used
    SearchDiagnostics diagnostics;
};

/// Max: min over the unit ball of sum_i acos Re(lambda_i), replaced by max_i acos Re(lambda_i)
/// where sum_j v_j F_j is normal. Sum: min over the ball of sum_i 2 acos Re(lambda_i).
BoundValue upper_bound(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt = {});

/// Max: min over the unit ball of max_i acos Re(lambda_i). Sum: min over the unit sphere of
/// max_i 2 acos|lambda_i|.
BoundValue lower_bound(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt = {});

/// acos(sqrt(p)) when the presented Kraus set is of the form sqrt(p) I plus traceless operators.
std::optional<double> exact_class_c(const KrausChannel& c, double tol = kDefaultTol);

struct UnitaryExtension {
    ComplexMatrix u;  // d'n x d'n, ancilla index first
    int d_prime = 0;
    ComplexMatrix w;  // d' x d', first row v
};

/// Greedy product of single-vector unitaries after rotating the Kraus set by W and
/// triangularising F_1' = sum_j v_j F_j. Its max time-energy is at most
/// sum_i acos Re(lambda_i(F_1')).
UnitaryExtension construct_extension(const KrausChannel& c, const DirectionVector& v);

/// Tr_ancilla[U (|0><0| (x) rho) U^dagger].
ComplexMatrix extension_apply(const UnitaryExtension& ext, const ComplexMatrix& rho);

struct BoundReport {
    Flavor flavor = Flavor::Max;
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> exact;
    std::string lower_label;  // "exact" on the class-C path, "heuristic-min" otherwise
    DirectionVector v_lower;
    DirectionVector v_upper;
    bool upper_tightened = false;
    std::optional<UnitaryExtension> extension;
    double extension_max_norm = 0.0;
    SearchDiagnostics lower_diagnostics;
    SearchDiagnostics upper_diagnostics;
};

BoundReport compute_bounds(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt = {},
                           bool with_extension = true);

struct ErasureComparison {
    int n = 0;
    double delta = 0.0;
    double q = 0.0;
    double quantum = 0.0;
    double classical = 0.0;
    double ratio = 0.0;
    double asymptote = 0.0;  // sqrt((n+1)/n)
    bool limit = false;      // ratio is the delta -> 0 limit
};

/// Depolarizing versus classical-noise channel at equal trace-distance noise delta.
ErasureComparison erasure_compare(int n, double delta);

struct CascadeAnalysis {
    int n = 0;
    double q = 0.0;
    int k = 0;
    double single = 0.0;
    double separate = 0.0;  // k * single
    double combined = 0.0;  // value of the k-fold composition
    double ratio = 0.0;     // combined / single
    double sqrt_k = 0.0;
    bool limit = false;     // single = 0, ratio is the q -> 1 limit sqrt(k)
};

CascadeAnalysis cascade_analysis(int n, double q, int k);

}  // namespace teq
