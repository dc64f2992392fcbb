#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "teq/channel.hpp"
#include "teq/matrix.hpp"

namespace teq {

struct OptimizerConfig {
    int restarts = 32;       // quasi-random starts, in addition to the canonical ones
    int max_evals = 2000;    // objective evaluations per start
    std::uint64_t seed = 0;
    double tol = 1e-9;       // simplex diameter at which a local search stops
};

using RealObjective = std::function<double(std::span<const double>)>;

struct LocalResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
    double diameter = 0.0;
};

/// Nelder-Mead with dimension-adaptive coefficients. The simplex is rebuilt around the
/// incumbent after each convergence while the budget lasts and a rebuild still improves
/// the value, which keeps the search from stalling on kinks of non-smooth objectives.
LocalResult nelder_mead(const RealObjective& f, std::vector<double> x0, double step, int max_evals, double tol);

/// True when (va, a) should be preferred over (vb, b): smaller value, then lexicographically
/// smaller point. Used for order-independent reduction over restarts.
bool better_candidate(double va, std::span<const double> a, double vb, std::span<const double> b);

/// Maps v onto the feasible set: radial projection onto the closed unit ball, or
/// normalisation onto the sphere (the zero vector goes to e_1).
ComplexVector project_direction(const ComplexVector& v, NormConstraint mode);

struct DirectionSearchResult {
    ComplexVector v;
    double value = 0.0;
    int starts = 0;
    int evaluations = 0;
    int converged_starts = 0;
    double worst_diameter = 0.0;  // largest final simplex diameter over all starts
};

using DirectionObjective = std::function<double(const ComplexVector&)>;

/// Multi-start derivative-free minimisation over direction vectors of length d. Starts are
/// e_1..e_d followed by `restarts` seeded random points; the result is the best over all
/// starts and is identical for identical (objective, d, mode, config).
DirectionSearchResult optimize_direction(const DirectionObjective& objective, int d, NormConstraint mode,
                                         const OptimizerConfig& config);

}  // namespace teq
