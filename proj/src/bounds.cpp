#include "teq/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "teq/single_vector.hpp"

namespace teq {

const char* flavor_name(Flavor f) { return f == Flavor::Max ? "max" : "sum"; }

double clipped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

namespace {

ComplexMatrix combine(const KrausChannel& c, const ComplexVector& v) {
    ComplexMatrix m = ComplexMatrix::Zero(c.dim(), c.dim());
    for (int j = 0; j < c.count(); ++j) m += v(j) * c.op(j);
    return m;
}

double sum_acos_re(const std::vector<Complex>& eig) {
    double s = 0.0;
    for (auto l : eig) s += clipped_acos(l.real());
    return s;
}

double max_acos_re(const std::vector<Complex>& eig) {
    double s = 0.0;
    for (auto l : eig) s = std::max(s, clipped_acos(l.real()));
    return s;
}

double max_acos_abs(const std::vector<Complex>& eig) {
    double s = 0.0;
    for (auto l : eig) s = std::max(s, clipped_acos(std::abs(l)));
    return s;
}

// All-zero Kraus operators do not enter sum_j v_j F_j; the search runs without them and the
// direction is scattered back with zeros in their slots.
struct ActiveOperators {
    KrausChannel channel;
    std::vector<int> index;
};

ActiveOperators active_operators(const KrausChannel& c) {
    std::vector<ComplexMatrix> ops;
    std::vector<int> index;
    for (int j = 0; j < c.count(); ++j) {
        if (c.op(j).cwiseAbs().maxCoeff() > 0.0) {
            ops.push_back(c.op(j));
            index.push_back(j);
        }
    }
    return {KrausChannel::validate(std::move(ops), std::max(kDefaultTol, 2.0 * c.residual())), std::move(index)};
}

ComplexVector scatter(const ComplexVector& v, const std::vector<int>& index, int count) {
    ComplexVector out = ComplexVector::Zero(count);
    for (size_t k = 0; k < index.size(); ++k) out(index[k]) = v(static_cast<Eigen::Index>(k));
    return out;
}

SearchDiagnostics diagnostics_of(const DirectionSearchResult& r) {
    return SearchDiagnostics{r.starts, r.evaluations, r.converged_starts, r.worst_diameter};
}

}  // namespace

std::vector<Complex> objective_eigenvalues(const KrausChannel& c, const DirectionVector& v) {
    if (v.v.size() != c.count()) throw std::invalid_argument("objective_eigenvalues: direction length differs from Kraus count");
    return spectrum(combine(c, v.v));
}

BoundValue upper_bound(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt) {
    const double scale = flavor == Flavor::Max ? 1.0 : 2.0;
    const auto active = active_operators(c);
    auto objective = [&](const ComplexVector& v) { return scale * sum_acos_re(spectrum(combine(active.channel, v))); };
    const auto search = optimize_direction(objective, active.channel.count(), NormConstraint::Ball, opt);

    // Every feasible v certifies a value; besides the search optimum the canonical directions
    // are tried because the normal-case tightening can make them strictly better.
    // Canonical directions go first so exact ties keep the clean witness. The zero direction
    // is the appended all-zero Kraus operator; its combination is normal with value pi/2.
    std::vector<ComplexVector> candidates;
    for (int j = 0; j < c.count(); ++j) candidates.push_back(ComplexVector::Unit(c.count(), j));
    candidates.push_back(ComplexVector::Zero(c.count()));
    candidates.push_back(scatter(search.v, active.index, c.count()));

    BoundValue best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& v : candidates) {
        const ComplexMatrix m = combine(c, v);
        const auto eig = spectrum(m);
        double value = scale * sum_acos_re(eig);
        bool tightened = false;
        if (flavor == Flavor::Max && is_normal(m)) {
            value = max_acos_re(eig);
            tightened = true;
        }
        if (value < best.value) {
            best.value = value;
            best.v = DirectionVector::make(v, NormConstraint::Ball);
            best.tightened = tightened;
        }
    }
    best.diagnostics = diagnostics_of(search);
    return best;
}

BoundValue lower_bound(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt) {
    const auto mode = flavor == Flavor::Max ? NormConstraint::Ball : NormConstraint::Sphere;
    const auto active = active_operators(c);
    auto objective = [&](const ComplexVector& v) {
        const auto eig = spectrum(combine(active.channel, v));
        return flavor == Flavor::Max ? max_acos_re(eig) : 2.0 * max_acos_abs(eig);
    };
    const auto search = optimize_direction(objective, active.channel.count(), mode, opt);
    BoundValue out;
    out.value = search.value;
    out.v = DirectionVector::make(scatter(search.v, active.index, c.count()), mode);
    out.diagnostics = diagnostics_of(search);
    return out;
}

std::optional<double> exact_class_c(const KrausChannel& c, double tol) {
    const auto witness = classify_class_c(c, tol);
    if (!witness) return std::nullopt;
    return clipped_acos(std::sqrt(witness->p));
}

UnitaryExtension construct_extension(const KrausChannel& c, const DirectionVector& dv) {
    if (dv.v.size() != c.count()) throw std::invalid_argument("construct_extension: direction length differs from Kraus count");
    const double nrm = dv.v.norm();
    if (nrm > 1.0 + 1e-12) throw std::invalid_argument("construct_extension: direction outside the unit ball");

    const int n = c.dim();
    ComplexVector first = dv.v;
    KrausChannel base = c;
    if (nrm < 1.0 - 1e-12) {
        base = pad_zero(c, c.count() + 1);
        first.conservativeResize(c.count() + 1);
        first(c.count()) = std::sqrt(std::max(0.0, 1.0 - nrm * nrm));
    } else {
        first /= nrm;
    }
    const int dp = static_cast<int>(first.size());

    const ComplexMatrix w = complete_to_unitary(first).transpose();
    const KrausChannel rotated = kraus_rotate(base, w, 1e-9);
    const SchurForm sf = schur(rotated.op(0));
    const KrausChannel tri = conjugate_first(rotated, sf.q.adjoint(), 1e-9);
    const ComplexMatrix g = stack(tri);

    const Eigen::Index r = static_cast<Eigen::Index>(dp) * n;
    ComplexMatrix u = ComplexMatrix::Identity(r, r);
    for (int i = 0; i < n; ++i) {
        const ComplexVector e = ComplexVector::Unit(r, i);
        const ComplexVector b = g.col(i);
        u = optimal_max_unitary(e, b) * u;
    }

    ComplexMatrix back = ComplexMatrix::Identity(r, r);
    back.topLeftCorner(n, n) = sf.q;
    return UnitaryExtension{back * u * back.adjoint(), dp, w};
}

ComplexMatrix extension_apply(const UnitaryExtension& ext, const ComplexMatrix& rho) {
    const Eigen::Index n = rho.rows();
    if (ext.u.rows() != n * ext.d_prime) throw std::invalid_argument("extension_apply: state dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < ext.d_prime; ++i) {
        const ComplexMatrix block = ext.u.block(i * n, 0, n, n);
        out += block * rho * block.adjoint();
    }
    return out;
}

BoundReport compute_bounds(const KrausChannel& c, Flavor flavor, const OptimizerConfig& opt, bool with_extension) {
    BoundReport rep;
    rep.flavor = flavor;
    const auto lo = lower_bound(c, flavor, opt);
    const auto up = upper_bound(c, flavor, opt);
    rep.lower = lo.value;
    rep.upper = up.value;
    rep.v_lower = lo.v;
    rep.v_upper = up.v;
    rep.upper_tightened = up.tightened;
    rep.lower_diagnostics = lo.diagnostics;
    rep.upper_diagnostics = up.diagnostics;
    if (flavor == Flavor::Max) rep.exact = exact_class_c(c);
    rep.lower_label = rep.exact ? "exact" : "heuristic-min";
    if (with_extension) {
        rep.extension = construct_extension(c, up.v);
        rep.extension_max_norm = max_norm(rep.extension->u);
    }
    return rep;
}

ErasureComparison erasure_compare(int n, double delta) {
    if (n < 2) throw std::invalid_argument("erasure_compare: n must be at least 2");
    const double top = n / (n + 1.0);
    if (!(delta >= 0.0 && delta <= top + 1e-12)) {
        throw std::invalid_argument("erasure_compare: delta must lie in [0, n/(n+1)]");
    }
    ErasureComparison out;
    out.n = n;
    out.delta = delta;
    out.q = q_from_delta(n, delta);
    out.quantum = *exact_class_c(depolarizing_quantum(n, out.q));
    out.classical = *exact_class_c(noisy_classical(n, out.q));
    out.asymptote = std::sqrt((n + 1.0) / n);
    if (out.classical == 0.0) {
        out.ratio = out.asymptote;
        out.limit = true;
    } else {
        out.ratio = out.quantum / out.classical;
    }
    return out;
}

CascadeAnalysis cascade_analysis(int n, double q, int k) {
    if (k < 1) throw std::invalid_argument("cascade_analysis: k must be positive");
    CascadeAnalysis out;
    out.n = n;
    out.q = q;
    out.k = k;
    out.single = *exact_class_c(depolarizing_quantum(n, q));
    out.combined = *exact_class_c(depolarizing_cascade(n, q, k));
    out.separate = k * out.single;
    out.sqrt_k = std::sqrt(static_cast<double>(k));
    if (out.single == 0.0) {
        out.ratio = out.sqrt_k;
        out.limit = true;
    } else {
        out.ratio = out.combined / out.single;
    }
    return out;
}

}  // namespace teq
