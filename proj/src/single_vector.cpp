#include "teq/single_vector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace teq {

namespace {

constexpr double kChordImagTol = 1e-9;
constexpr double kParallelTol = 1e-13;
constexpr Complex kI(0.0, 1.0);

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

Complex unit(double theta) { return std::polar(1.0, theta); }

double wrap(double theta) { return principal_angle(unit(theta)); }

// Im(conj(u) v)
double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

// U = I - a a^dagger - p p^dagger + [a p] tilde [a p]^dagger, with a, p orthonormal.
ComplexMatrix assemble(const ComplexVector& a, const ComplexVector& p, const Eigen::Matrix2cd& tilde) {
    const auto r = a.size();
    ComplexMatrix basis(r, 2);
    basis.col(0) = a;
    basis.col(1) = p;
    ComplexMatrix u = ComplexMatrix::Identity(r, r) - basis * basis.adjoint();
    u.noalias() += basis * tilde * basis.adjoint();
    return u;
}

// Splits b = w a + v with v orthogonal to a; returns (w, v).
std::pair<Complex, ComplexVector> split(const ComplexVector& a, const ComplexVector& b) {
    const Complex w = a.dot(b);
    ComplexVector v = b - w * a;
    v -= a * a.dot(v);
    return {w, v};
}

void require_unit_pair(const ComplexVector& a, const ComplexVector& b, const char* what) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument(std::string(what) + ": vectors must have equal length >= 2");
    }
    if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument(std::string(what) + ": vectors must be unit norm");
    }
}

// Builds the embedded unitary for a chord already known to pass through <a|b>.
ComplexMatrix embed_trusted(const ComplexVector& a, const ComplexVector& b, double theta_sum) {
    const auto [w, v] = split(a, b);
    const double sigma = v.norm();
    const auto r = a.size();
    if (sigma < kParallelTol) {
        const double mag = std::abs(w);
        const Complex phase = mag > 0.0 ? w / mag : Complex(1.0, 0.0);
        return ComplexMatrix::Identity(r, r) + (phase - 1.0) * a * a.adjoint();
    }
    const ComplexVector p = v / sigma;
    // sigma = ||b - w a|| keeps the 2x2 block unitary to rounding even when |w| is near 1.
    const Complex phase = unit(theta_sum);
    Eigen::Matrix2cd tilde;
    tilde << w, -phase * sigma, sigma, phase * std::conj(w);
    return assemble(a, p, tilde);
}

// ---- polygon reduction helpers ----

struct Decomposition {
    double alpha = 0.0;  // weight on the anchor
    size_t i = 0;
    size_t j = 0;
    double beta = 0.0;  // y = (1-beta) rest[i] + beta rest[j]
};

// Writes t = alpha * anchor + (1 - alpha) * y with y in conv(rest), if possible.
std::optional<Decomposition> decompose(Complex t, Complex anchor, const std::vector<Complex>& rest) {
    constexpr double eps = 1e-12;
    const Complex dir = t - anchor;
    if (std::abs(dir) < 1e-14) return Decomposition{1.0, 0, 0, 0.0};

    if (rest.size() == 1) {
        const double s = (std::conj(dir) * (rest[0] - t)).real() / std::norm(dir);
        if (s >= -eps && std::abs(t + s * dir - rest[0]) <= 1e-11) {
            const double sp = std::max(s, 0.0);
            return Decomposition{sp / (1.0 + sp), 0, 0, 0.0};
        }
        return std::nullopt;
    }

    std::vector<size_t> order(rest.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return std::arg(rest[x]) < std::arg(rest[y]); });
    const size_t edges = rest.size() == 2 ? 1 : rest.size();

    std::optional<Decomposition> best;
    double best_s = -1.0;
    for (size_t e = 0; e < edges; ++e) {
        const size_t ia = order[e];
        const size_t ib = order[(e + 1) % rest.size()];
        const Complex edge = rest[ib] - rest[ia];
        const double denom = cross(dir, edge);
        if (std::abs(denom) < 1e-15) continue;
        const Complex f = rest[ia] - t;
        const double s = cross(f, edge) / denom;
        const double beta = cross(f, dir) / denom;
        if (s < -eps || beta < -eps || beta > 1.0 + eps) continue;
        if (s > best_s) {
            best_s = s;
            const double sp = std::max(s, 0.0);
            best = Decomposition{sp / (1.0 + sp), ia, ib, std::clamp(beta, 0.0, 1.0)};
        }
    }
    return best;
}

double residual_of(const std::vector<double>& vertices, const std::vector<double>& weights, Complex target) {
    Complex sum(0.0, 0.0);
    for (size_t k = 0; k < vertices.size(); ++k) sum += weights[k] * unit(vertices[k]);
    return std::abs(sum - target);
}

PolygonState make_state(std::vector<double> vertices, std::vector<double> weights, Complex target, const MuWeights& mu) {
    PolygonState st;
    st.target_residual = residual_of(vertices, weights, target);
    st.mu_value = mu_norm_of_angles(vertices, mu);
    st.vertices = std::move(vertices);
    st.weights = std::move(weights);
    return st;
}

bool same_side(double x, double y) { return (x <= 0.0 && y <= 0.0) || (x >= 0.0 && y >= 0.0); }

}  // namespace

Overlap Overlap::make(Complex w) {
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1.0 + 1e-12) {
        throw std::invalid_argument("Overlap: |w| must not exceed 1");
    }
    return Overlap{w};
}

double f_max(Overlap o) { return clamped_acos(Overlap::make(o.w).w.real()); }

double f_sum_lower(Overlap o) { return 2.0 * clamped_acos(Overlap::make(o.w).r()); }

double f_sum_upper(Overlap o) { return 2.0 * clamped_acos(Overlap::make(o.w).w.real()); }

std::optional<double> chord_weight(double theta1, double theta2, Complex w) {
    const Complex e1 = unit(theta1);
    const Complex e2 = unit(theta2);
    const Complex diff = e1 - e2;
    if (std::abs(diff) < 1e-14) {
        if (std::abs(w - e1) <= 1e-10) return 1.0;
        throw std::invalid_argument("chord_weight: coincident endpoints and w is not that point");
    }
    const Complex z = (w - e2) / diff;
    if (std::abs(z.imag()) > kChordImagTol) return std::nullopt;
    if (z.real() < -kChordImagTol || z.real() > 1.0 + kChordImagTol) return std::nullopt;
    return std::clamp(z.real(), 0.0, 1.0);
}

ChordSolution chord_solution(double theta1, double theta2, Complex w) {
    const auto z = chord_weight(theta1, theta2, w);
    if (!z) throw std::invalid_argument("chord_solution: chord does not pass through w");
    ChordSolution sol;
    sol.theta1 = theta1;
    sol.theta2 = theta2;
    sol.z = *z;
    // e^{ix}(e^{i t1} - e^{i t2}) = 2 (-1)^{s+1} sin((t1 - t2)/2) must be non-negative.
    sol.s = std::sin(0.5 * (theta1 - theta2)) >= 0.0 ? 1 : 0;
    const double sign = sol.s == 0 ? 1.0 : -1.0;
    sol.x = principal_angle(kI * sign * unit(-0.5 * (theta1 + theta2)));
    return sol;
}

std::pair<double, double> chord_residuals(const ChordSolution& sol, Complex w) {
    const Complex e1 = unit(sol.theta1);
    const Complex e2 = unit(sol.theta2);
    const double first = std::abs(sol.z * e1 + (1.0 - sol.z) * e2 - w);
    const Complex rhs = std::sqrt(sol.z * (1.0 - sol.z)) * unit(sol.x) * (e1 - e2);
    const double lhs = std::sqrt(std::max(0.0, 1.0 - std::norm(w)));
    return {first, std::abs(rhs - lhs)};
}

ComplexMatrix build_tilde_u(Complex w, double theta1, double theta2) {
    (void)Overlap::make(w);
    if (std::abs(w) >= 1.0 - 1e-15) {
        throw std::invalid_argument("build_tilde_u: |w| = 1, the vectors are parallel (use embed_full)");
    }
    if (!chord_weight(theta1, theta2, w)) throw std::invalid_argument("build_tilde_u: infeasible chord");
    const double sigma = std::sqrt(1.0 - std::norm(w));
    const Complex phase = unit(theta1 + theta2);
    ComplexMatrix out(2, 2);
    out << w, -phase * sigma, sigma, phase * std::conj(w);
    return out;
}

ComplexVector a_perp(const ComplexVector& a, const ComplexVector& b) {
    require_unit_pair(a, b, "a_perp");
    const auto [w, v] = split(a, b);
    const double sigma = v.norm();
    if (sigma < kParallelTol) throw std::invalid_argument("a_perp: vectors are parallel");
    return v / sigma;
}

ComplexMatrix embed_full(const ComplexVector& a, const ComplexVector& b, double theta1, double theta2) {
    require_unit_pair(a, b, "embed_full");
    const auto [w, v] = split(a, b);
    if (v.norm() >= kParallelTol && !chord_weight(theta1, theta2, w)) {
        throw std::invalid_argument("embed_full: infeasible chord");
    }
    return embed_trusted(a, b, theta1 + theta2);
}

ComplexMatrix optimal_max_unitary(const ComplexVector& a, const ComplexVector& b) {
    require_unit_pair(a, b, "optimal_max_unitary");
    // theta1 + theta2 = 0; the vertical chord always passes through <a|b>.
    return embed_trusted(a, b, 0.0);
}

ChordReduction reduce_to_chord(const std::vector<double>& vertices, const std::vector<double>& weights, Complex target,
                               const std::optional<MuWeights>& mu_in) {
    if (vertices.size() != weights.size() || vertices.size() < 2) {
        throw std::invalid_argument("reduce_to_chord: need at least two vertices with one weight each");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= -1e-12)) throw std::invalid_argument("reduce_to_chord: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("reduce_to_chord: weights must sum to 1");

    std::vector<double> vs;
    std::vector<double> ws;
    for (size_t k = 0; k < vertices.size(); ++k) {
        vs.push_back(wrap(vertices[k]));
        ws.push_back(std::max(weights[k], 0.0));
    }
    if (residual_of(vs, ws, target) > 1e-9) {
        throw std::invalid_argument("reduce_to_chord: inconsistent input, weighted vertices do not reproduce the target");
    }
    const MuWeights mu = mu_in ? *mu_in : MuWeights::sum_weights(static_cast<int>(vs.size()));

    ChordReduction out;
    out.states.push_back(make_state(vs, ws, target, mu));

    while (vs.size() > 2) {
        // Weightless vertices are dropped first; each drop sets one eigenangle to zero.
        const auto lightest = static_cast<size_t>(std::min_element(ws.begin(), ws.end()) - ws.begin());
        if (ws[lightest] <= 1e-14) {
            vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(lightest));
            ws.erase(ws.begin() + static_cast<std::ptrdiff_t>(lightest));
            out.states.push_back(make_state(vs, ws, target, mu));
            continue;
        }

        std::vector<size_t> order(vs.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return vs[x] < vs[y]; });
        size_t pick = order.size();
        for (size_t k = 0; k + 1 < order.size(); ++k) {
            if (same_side(vs[order[k]], vs[order[k + 1]])) {
                pick = k;
                break;
            }
        }
        if (pick == order.size()) throw NumericalError("reduce_to_chord: no adjacent same-sign vertex pair");
        const size_t ia = order[pick];
        const size_t ib = order[pick + 1];
        const double ta = vs[ia];
        const double tb = vs[ib];

        std::vector<double> rest_v;
        std::vector<double> rest_w;
        std::vector<Complex> rest_pts;
        for (size_t k = 0; k < vs.size(); ++k) {
            if (k == ia || k == ib) continue;
            rest_v.push_back(vs[k]);
            rest_w.push_back(ws[k]);
            rest_pts.push_back(unit(vs[k]));
        }

        if (tb - ta < 1e-15) {
            rest_v.push_back(ta);
            rest_w.push_back(ws[ia] + ws[ib]);
            vs = std::move(rest_v);
            ws = std::move(rest_w);
            out.states.push_back(make_state(vs, ws, target, mu));
            continue;
        }

        // Ray from the centroid of the other vertices through the pair's centroid leaves the
        // disk through the arc [ta, tb]; that exit point is always admissible.
        const double pair_mass = ws[ia] + ws[ib];
        const Complex p = (ws[ia] * unit(ta) + ws[ib] * unit(tb)) / pair_mass;
        Complex rest_sum(0.0, 0.0);
        double rest_mass = 0.0;
        for (size_t k = 0; k < rest_v.size(); ++k) {
            rest_sum += rest_w[k] * rest_pts[k];
            rest_mass += rest_w[k];
        }
        const Complex centroid = rest_sum / rest_mass;
        const Complex dir = p - centroid;
        double theta_ray = ta;
        if (std::abs(dir) > 1e-14) {
            const double a2 = std::norm(dir);
            const double bq = (std::conj(centroid) * dir).real();
            const double cq = std::norm(centroid) - 1.0;
            const double tau = (-bq + std::sqrt(std::max(0.0, bq * bq - a2 * cq))) / a2;
            theta_ray = std::clamp(principal_angle(centroid + tau * dir), ta, tb);
        }
        auto feasible = [&](double theta) { return decompose(target, unit(theta), rest_pts); };

        if (!feasible(theta_ray)) {
            // Rounding can push the exit point just outside; fall back to a scan of the arc.
            bool found = false;
            for (int k = 0; k <= 4096 && !found; ++k) {
                const double th = ta + (tb - ta) * k / 4096.0;
                if (feasible(th)) {
                    theta_ray = th;
                    found = true;
                }
            }
            if (!found) throw NumericalError("reduce_to_chord: no admissible merged vertex found");
        }

        const double theta_small = std::abs(ta) <= std::abs(tb) ? ta : tb;
        double chosen = theta_small;
        if (!feasible(theta_small)) {
            double lo = theta_ray;
            double hi = theta_small;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (feasible(mid)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            chosen = lo;
        }
        const auto dec = *feasible(chosen);

        std::vector<double> next_w(rest_v.size(), 0.0);
        next_w[dec.i] += (1.0 - dec.alpha) * (1.0 - dec.beta);
        next_w[dec.j] += (1.0 - dec.alpha) * dec.beta;
        rest_v.push_back(chosen);
        next_w.push_back(dec.alpha);
        vs = std::move(rest_v);
        ws = std::move(next_w);
        out.states.push_back(make_state(vs, ws, target, mu));
    }

    for (size_t k = 1; k < out.states.size(); ++k) {
        if (out.states[k].mu_value > out.states[k - 1].mu_value + 1e-12) out.monotone = false;
    }

    const size_t hi = vs[0] >= vs[1] ? 0 : 1;
    const size_t lo = 1 - hi;
    ChordSolution sol;
    sol.theta1 = vs[hi];
    sol.theta2 = vs[lo];
    sol.z = std::clamp(ws[hi] / (ws[hi] + ws[lo]), 0.0, 1.0);
    sol.s = std::sin(0.5 * (sol.theta1 - sol.theta2)) >= 0.0 ? 1 : 0;
    const double sign = sol.s == 0 ? 1.0 : -1.0;
    sol.x = principal_angle(kI * sign * unit(-0.5 * (sol.theta1 + sol.theta2)));
    out.solution = sol;
    return out;
}

double chord_min_angle(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("chord_min_angle: r must lie in [0, 1]");
    return 2.0 * std::acos(r);
}

double chord_subtended_angle(Complex point, double direction) {
    if (std::abs(point) > 1.0 + 1e-12) throw std::invalid_argument("chord_subtended_angle: point outside the disk");
    const Complex u = unit(direction);
    const double b = (std::conj(point) * u).real();
    const double disc = std::sqrt(std::max(0.0, b * b + 1.0 - std::norm(point)));
    const Complex e_plus = point + (-b + disc) * u;
    const Complex e_minus = point + (-b - disc) * u;
    return std::abs(std::arg(e_plus * std::conj(e_minus)));
}

}  // namespace teq
