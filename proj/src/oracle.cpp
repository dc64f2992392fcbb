#include "teq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "teq/measure.hpp"
#include "teq/random.hpp"
#include "teq/single_vector.hpp"

namespace teq {

namespace {

constexpr double kPi = std::numbers::pi;

// Householder reflector scaled so that its first column is x (unit norm).
ComplexMatrix first_column_unitary(const ComplexVector& x) {
    const auto r = x.size();
    const double phi = std::abs(x(0)) > 0.0 ? std::arg(x(0)) : 0.0;
    const Complex ph = std::polar(1.0, phi);
    ComplexVector u = x;
    u(0) += ph * x.norm();
    const ComplexMatrix h = ComplexMatrix::Identity(r, r) - 2.0 * u * u.adjoint() / u.squaredNorm();
    return -ph * h;
}

// exp(iH(x)) together with the spectral data needed for its derivative.
struct ExpFactor {
    ComplexMatrix u;
    ComplexMatrix q;
    Eigen::VectorXd h;
};

ExpFactor exp_factor(std::span<const double> params, int k) {
    if (k == 0) return ExpFactor{ComplexMatrix(0, 0), ComplexMatrix(0, 0), Eigen::VectorXd(0)};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_from_params(params, k));
    if (es.info() != Eigen::Success) throw NumericalError("oracle: Hermitian eigensolver did not converge");
    ExpFactor f{ComplexMatrix(), es.eigenvectors(), es.eigenvalues()};
    const Eigen::VectorXcd phases = (Complex(0.0, 1.0) * f.h.cast<Complex>()).array().exp();
    f.u = f.q * phases.asDiagonal() * f.q.adjoint();
    return f;
}

// out_j = Im Tr(Y dU/dx_j) for U = exp(iH(x)), via the divided differences of exp(i.).
void exp_factor_grad(const ExpFactor& f, const ComplexMatrix& y, std::span<double> out) {
    const auto k = f.h.size();
    ComplexMatrix gamma(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            const double ha = f.h(a);
            const double hb = f.h(b);
            if (std::abs(ha - hb) > 1e-9) {
                gamma(a, b) = (std::polar(1.0, ha) - std::polar(1.0, hb)) / (ha - hb);
            } else {
                gamma(a, b) = Complex(0.0, 1.0) * std::polar(1.0, 0.5 * (ha + hb));
            }
        }
    }
    const ComplexMatrix z = f.q.adjoint() * y * f.q;
    const ComplexMatrix r = f.q * z.cwiseProduct(gamma.transpose()) * f.q.adjoint();
    size_t idx = 0;
    for (Eigen::Index a = 0; a < k; ++a) out[idx++] = r(a, a).imag();
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a + 1; b < k; ++b) {
            out[idx++] = (r(b, a) + r(a, b)).imag();
            out[idx++] = (r(b, a) - r(a, b)).real();
        }
    }
}

// A unitary-valued parametrisation: value and the contraction x -> Im Tr(X dU/dx).
class Model {
public:
    virtual ~Model() = default;
    virtual int dim() const = 0;
    virtual ComplexMatrix unitary(std::span<const double> x) const = 0;
    virtual void contract(std::span<const double> x, const ComplexMatrix& xmat, std::span<double> out) const = 0;
};

// U = P_b diag(1, V) P_a^dagger
class SingleVectorModel final : public Model {
public:
    SingleVectorModel(const ComplexVector& a, const ComplexVector& b)
        : pa_(first_column_unitary(a)), pb_(first_column_unitary(b)), k_(static_cast<int>(a.size()) - 1) {}

    int dim() const override { return k_ * k_; }

    ComplexMatrix unitary(std::span<const double> x) const override {
        return pb_ * embed(exp_factor(x, k_).u) * pa_.adjoint();
    }

    void contract(std::span<const double> x, const ComplexMatrix& xmat, std::span<double> out) const override {
        const ComplexMatrix y = pa_.adjoint() * xmat * pb_;
        exp_factor_grad(exp_factor(x, k_), y.bottomRightCorner(k_, k_), out);
    }

private:
    ComplexMatrix embed(const ComplexMatrix& v) const {
        ComplexMatrix s = ComplexMatrix::Identity(k_ + 1, k_ + 1);
        s.bottomRightCorner(k_, k_) = v;
        return s;
    }

    ComplexMatrix pa_;
    ComplexMatrix pb_;
    int k_;
};

// U = (W (x) I_n) [G | G_perp] diag(I_n, V); W = I when the ancilla rotation is fixed.
class ChannelModel final : public Model {
public:
    ChannelModel(const ComplexMatrix& g, int n, int d_prime, bool free_ancilla = true)
        : n_(n), dp_(d_prime), m_(d_prime * n - n), wdim_(free_ancilla ? d_prime * d_prime : 0) {
        basis_.resize(g.rows(), g.rows());
        basis_.leftCols(n) = g;
        basis_.rightCols(m_) = orthogonal_complement(g);
    }

    int dim() const override { return wdim_ + m_ * m_; }

    ComplexMatrix unitary(std::span<const double> x) const override {
        return kron_identity(w_part(x).u) * basis_ * embed(v_part(x).u);
    }

    void contract(std::span<const double> x, const ComplexMatrix& xmat, std::span<double> out) const override {
        const ExpFactor w = w_part(x);
        const ExpFactor v = v_part(x);
        if (wdim_ > 0) {
            const ComplexMatrix right = basis_ * embed(v.u);
            // Im Tr(X (dW (x) I) N) = Im Tr(B dW), B the partial trace of N X over the system.
            const ComplexMatrix a = right * xmat;
            ComplexMatrix b = ComplexMatrix::Zero(dp_, dp_);
            for (int j = 0; j < dp_; ++j) {
                for (int i = 0; i < dp_; ++i) {
                    for (int s = 0; s < n_; ++s) b(j, i) += a(j * n_ + s, i * n_ + s);
                }
            }
            exp_factor_grad(w, b, out.subspan(0, static_cast<size_t>(wdim_)));
        }
        const ComplexMatrix y = xmat * kron_identity(w.u) * basis_;
        exp_factor_grad(v, y.bottomRightCorner(m_, m_), out.subspan(static_cast<size_t>(wdim_)));
    }

private:
    ExpFactor w_part(std::span<const double> x) const {
        if (wdim_ == 0) {
            const ComplexMatrix id = ComplexMatrix::Identity(dp_, dp_);
            return ExpFactor{id, id, Eigen::VectorXd::Zero(dp_)};
        }
        return exp_factor(x.subspan(0, static_cast<size_t>(wdim_)), dp_);
    }
    ExpFactor v_part(std::span<const double> x) const {
        return exp_factor(x.subspan(static_cast<size_t>(wdim_), static_cast<size_t>(m_ * m_)), m_);
    }

    ComplexMatrix kron_identity(const ComplexMatrix& w) const {
        ComplexMatrix out = ComplexMatrix::Zero(dp_ * n_, dp_ * n_);
        for (int i = 0; i < dp_; ++i) {
            for (int j = 0; j < dp_; ++j) out.block(i * n_, j * n_, n_, n_) = w(i, j) * ComplexMatrix::Identity(n_, n_);
        }
        return out;
    }

    ComplexMatrix embed(const ComplexMatrix& v) const {
        ComplexMatrix s = ComplexMatrix::Identity(dp_ * n_, dp_ * n_);
        s.bottomRightCorner(m_, m_) = v;
        return s;
    }

    int n_;
    int dp_;
    int m_;
    int wdim_;
    ComplexMatrix basis_;
};

// Objectives on eigenangles: stage < kStages are smooth stand-ins (a p-norm continuation for
// max, sum sqrt(t^2 + eps^2) for sum); stage kStages is the flavor norm itself.
constexpr int kStages = 8;
constexpr double kPruneMargin = 1e-2;

double angle_objective(const std::vector<double>& th, Flavor flavor, int stage, std::vector<double>* slope) {
    if (slope) slope->assign(th.size(), 0.0);
    auto sgn = [](double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); };
    if (flavor == Flavor::Max) {
        size_t arg = 0;
        for (size_t k = 1; k < th.size(); ++k) {
            if (std::abs(th[k]) > std::abs(th[arg])) arg = k;
        }
        const double m = std::abs(th[arg]);
        if (stage >= kStages || m == 0.0) {
            if (slope) (*slope)[arg] = sgn(th[arg]);
            return m;
        }
        const double p = std::pow(4.0, stage + 1.0);
        double s = 0.0;
        for (double t : th) s += std::pow(std::abs(t) / m, p);
        const double value = m * std::pow(s, 1.0 / p);
        if (slope) {
            for (size_t k = 0; k < th.size(); ++k) (*slope)[k] = std::pow(std::abs(th[k]) / value, p - 1.0) * sgn(th[k]);
        }
        return value;
    }
    const double eps = stage >= kStages ? 0.0 : std::pow(10.0, -1.0 - stage);
    double value = 0.0;
    for (size_t k = 0; k < th.size(); ++k) {
        const double r = std::hypot(th[k], eps);
        value += r;
        if (slope) (*slope)[k] = r > 0.0 ? th[k] / r : 0.0;
    }
    return value;
}

struct Spectral {
    ComplexMatrix u;
    ComplexMatrix q;
    std::vector<double> theta;
};

Spectral spectral(const Model& model, std::span<const double> x) {
    Spectral out;
    out.u = model.unitary(x);
    const SchurForm sf = schur(out.u);
    out.q = sf.q;
    for (Eigen::Index k = 0; k < sf.t.rows(); ++k) out.theta.push_back(principal_angle(sf.t(k, k)));
    return out;
}

// Value and gradient of a staged objective at x.
double value_and_gradient(const Model& model, Flavor flavor, int stage, const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
    const Spectral sp = spectral(model, xs);
    std::vector<double> slope;
    const double value = angle_objective(sp.theta, flavor, stage, grad ? &slope : nullptr);
    if (grad) {
        Eigen::VectorXcd d(static_cast<Eigen::Index>(slope.size()));
        for (size_t k = 0; k < slope.size(); ++k) d(static_cast<Eigen::Index>(k)) = slope[k];
        const ComplexMatrix xmat = sp.q * d.asDiagonal() * sp.q.adjoint() * sp.u.adjoint();
        grad->resize(x.size());
        model.contract(xs, xmat, std::span<double>(grad->data(), static_cast<size_t>(grad->size())));
    }
    return value;
}

// BFGS with a weak Wolfe bracketing line search; the bracketing also copes with the kinks of
// the unsmoothed objective.
Eigen::VectorXd bfgs(const Model& model, Flavor flavor, int stage, Eigen::VectorXd x, int& evals, int cap) {
    const auto dim = x.size();
    auto eval = [&](const Eigen::VectorXd& y, Eigen::VectorXd* g) {
        ++evals;
        const double v = value_and_gradient(model, flavor, stage, y, g);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    Eigen::VectorXd gx;
    double fx = eval(x, &gx);
    if (!std::isfinite(fx)) return x;
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);
    int resets = 0;
    // Smoothing stages only warm-start the next one and stop early.
    const bool final_stage = stage >= kStages;
    const double progress = final_stage ? 1e-10 : 1e-9;
    const int patience = final_stage ? 10 : 5;
    double anchor = fx;
    int idle = 0;
    while (evals < cap && idle < patience) {
        Eigen::VectorXd d = -hinv * gx;
        double slope = d.dot(gx);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            d = -gx;
            slope = d.dot(gx);
            if (!(slope < 0.0)) break;
        }
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double t = 1.0;
        Eigen::VectorXd xn = x;
        Eigen::VectorXd gn = gx;
        double fn = fx;
        Eigen::VectorXd x_lo = x;
        Eigen::VectorXd g_lo = gx;
        double f_lo = fx;
        bool accepted = false;
        for (int k = 0; k < 50 && evals < cap; ++k) {
            const Eigen::VectorXd trial = x + t * d;
            Eigen::VectorXd gt;
            const double ft = eval(trial, &gt);
            if (ft > fx + 1e-4 * t * slope) {
                hi = t;
            } else if (gt.dot(d) < 0.9 * slope) {
                lo = t;
                x_lo = trial;
                g_lo = gt;
                f_lo = ft;
            } else {
                xn = trial;
                gn = gt;
                fn = ft;
                accepted = true;
                break;
            }
            t = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
            if (hi - lo < 1e-16) break;
        }
        if (!accepted) {
            if (lo == 0.0) {
                // No decrease along the quasi-Newton direction: retry once from steepest descent.
                if (resets++ > 0 || hinv.isIdentity()) break;
                hinv.setIdentity();
                continue;
            }
            xn = x_lo;
            gn = g_lo;
            fn = f_lo;
        }
        resets = 0;
        const Eigen::VectorXd s = xn - x;
        const Eigen::VectorXd y = gn - gx;
        const double sy = s.dot(y);
        if (sy > 1e-18) {
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
            hinv = (eye - s * y.transpose() / sy) * hinv * (eye - y * s.transpose() / sy) + s * s.transpose() / sy;
        }
        const double drop = fx - fn;
        x = xn;
        fx = fn;
        gx = gn;
        if (s.lpNorm<Eigen::Infinity>() < 1e-14 || (drop <= 0.0 && gx.norm() < 1e-12)) break;
        // Progress is measured against an anchor so that creeping along a kink ends the stage.
        if (fx < anchor - progress * std::max(1.0, std::abs(anchor))) {
            anchor = fx;
            idle = 0;
        } else {
            ++idle;
        }
    }
    return x;
}

// One start: BFGS through the smoothing stages onto the true objective, then a short simplex
// search from the best point.
LocalResult local_search(const Model& model, Flavor flavor, const std::vector<double>& x0, int max_evals, double tol,
                         double incumbent) {
    int evals = 0;
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size()));
    std::vector<double> best(x0);
    double best_value = value_and_gradient(model, flavor, kStages, x, nullptr);
    ++evals;
    const int gradient_cap = max_evals * 3 / 4;
    for (int stage = 0; stage <= kStages && evals < gradient_cap; ++stage) {
        x = bfgs(model, flavor, stage, x, evals, gradient_cap);
        const double v = value_and_gradient(model, flavor, kStages, x, nullptr);
        ++evals;
        if (v < best_value) {
            best_value = v;
            best.assign(x.data(), x.data() + x.size());
        }
        // Past the middle stage the remaining descent is far below this margin.
        if (stage == kStages / 2 && best_value > incumbent + kPruneMargin) {
            return LocalResult{best, best_value, evals, false, 0.0};
        }
    }
    const RealObjective f = [&](std::span<const double> y) {
        return angle_objective(spectral(model, y).theta, flavor, kStages, nullptr);
    };
    const int polish = std::min(max_evals - evals, 20 * model.dim());
    auto polished = nelder_mead(f, best, 1e-3, std::max(polish, 0), tol);
    polished.evaluations += evals;
    if (!(polished.value <= best_value)) {
        polished.value = best_value;
        polished.x = best;
    }
    return polished;
}

OracleResult multi_start(const Model& model, Flavor flavor, const OracleBudget& budget) {
    OracleResult out;
    out.seed = budget.seed;
    out.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < std::max(budget.restarts, 1); ++i) {
        auto rng = derived_rng(budget.seed, static_cast<std::uint64_t>(i));
        std::vector<double> x0(static_cast<size_t>(model.dim()));
        for (auto& x : x0) x = uniform(rng, -kPi, kPi);
        auto local = local_search(model, flavor, x0, budget.max_evals, budget.tol, out.value);
        out.evals += local.evaluations;
        if (out.argument.empty() || better_candidate(local.value, local.x, out.value, out.argument)) {
            out.value = local.value;
            out.argument = std::move(local.x);
        }
    }
    return out;
}

ComplexMatrix padded_stack(const KrausChannel& c, int d_prime) {
    ComplexMatrix g = ComplexMatrix::Zero(static_cast<Eigen::Index>(d_prime) * c.dim(), c.dim());
    g.topRows(static_cast<Eigen::Index>(c.count()) * c.dim()) = stack(c);
    return g;
}

void require_channel_scale(const KrausChannel& c, int d_prime) {
    if (c.dim() != 2) throw std::invalid_argument("brute_channel: only n = 2 is within budget");
    if (d_prime < c.count() || d_prime > 4) {
        throw std::invalid_argument("brute_channel: d' must satisfy d <= d' <= 4");
    }
}

std::string describe(const std::vector<double>& xs) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    os << "]";
    return os.str();
}

void record(LemmaReport& rep, double residual, bool ok, const std::string& instance) {
    if (std::isfinite(residual)) rep.max_residual = std::max(rep.max_residual, residual);
    if (!ok) {
        ++rep.violations;
        if (!rep.first_failure) rep.first_failure = instance;
    }
}

double magnitude_mu(std::vector<double> angles, const std::vector<double>& mu) {
    for (auto& a : angles) a = std::abs(a);
    std::sort(angles.rbegin(), angles.rend());
    double s = 0.0;
    for (size_t j = 0; j < angles.size() && j < mu.size(); ++j) s += mu[j] * angles[j];
    return s;
}

}  // namespace

OracleResult brute_single_vector(const ComplexVector& a, const ComplexVector& b, Flavor flavor, const OracleBudget& budget) {
    const auto r = static_cast<int>(a.size());
    if (r < 2 || r > 4 || b.size() != a.size()) throw std::invalid_argument("brute_single_vector: dimension must be 2..4");
    if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("brute_single_vector: vectors must be unit norm");
    }
    return multi_start(SingleVectorModel(a, b), flavor, budget);
}

ComplexMatrix brute_channel_unitary(const KrausChannel& c, int d_prime, const std::vector<double>& argument) {
    require_channel_scale(c, d_prime);
    const ChannelModel model(padded_stack(c, d_prime), c.dim(), d_prime);
    if (static_cast<int>(argument.size()) != model.dim()) {
        throw std::invalid_argument("brute_channel_unitary: argument length mismatch");
    }
    return model.unitary(argument);
}

OracleResult brute_channel(const KrausChannel& c, Flavor flavor, int d_prime, const OracleBudget& budget) {
    require_channel_scale(c, d_prime);
    return multi_start(ChannelModel(padded_stack(c, d_prime), c.dim(), d_prime), flavor, budget);
}

OracleResult brute_completion(const KrausChannel& c, Flavor flavor, int d_prime, const OracleBudget& budget) {
    require_channel_scale(c, d_prime);
    return multi_start(ChannelModel(padded_stack(c, d_prime), c.dim(), d_prime, false), flavor, budget);
}

LemmaReport check_polygon_reduction(std::uint64_t seed, int trials) {
    LemmaReport rep;
    rep.name = "polygon-reduction";
    rep.trials = std::max(trials, 0);
    for (int t = 0; t < rep.trials; ++t) {
        auto rng = derived_rng(seed, static_cast<std::uint64_t>(t));
        const int m = 3 + static_cast<int>(std::uniform_int_distribution<int>(0, 2)(rng));
        std::vector<double> angles(static_cast<size_t>(m));
        std::vector<double> weights(static_cast<size_t>(m));
        const int shape = t % 8;
        double total = 0.0;
        for (int j = 0; j < m; ++j) {
            if (shape == 0) {
                angles[j] = -kPi + 2.0 * kPi * (j + 0.5) / m;  // symmetric polygon
                weights[j] = 1.0;
            } else if (shape == 1) {
                angles[j] = uniform(rng, 0.3, 0.3 + 1e-7) * (j % 2 ? 1.0 : -1.0);  // nearly coincident pairs
                weights[j] = uniform(rng, 0.0, 1.0);
            } else {
                angles[j] = uniform(rng, -kPi, kPi);
                weights[j] = -std::log(uniform(rng, 1e-300, 1.0));
            }
            total += weights[j];
        }
        for (auto& w : weights) w /= total;
        Complex target(0.0, 0.0);
        for (int j = 0; j < m; ++j) target += weights[j] * std::polar(1.0, angles[j]);

        std::vector<double> mu(static_cast<size_t>(m));
        for (auto& x : mu) x = uniform(rng, 0.0, 1.0);
        std::sort(mu.rbegin(), mu.rend());
        mu[0] = std::max(mu[0], 1e-3);

        const std::string instance = "trial " + std::to_string(t) + " seed " + std::to_string(seed) +
                                     " angles " + describe(angles) + " weights " + describe(weights);
        try {
            const auto red = reduce_to_chord(angles, weights, target, MuWeights::make(mu));
            double worst = 0.0;
            bool ok = red.monotone && red.states.size() >= 2;
            double prev_mu = std::numeric_limits<double>::infinity();
            for (const auto& st : red.states) {
                Complex sum(0.0, 0.0);
                for (size_t j = 0; j < st.vertices.size(); ++j) sum += st.weights[j] * std::polar(1.0, st.vertices[j]);
                worst = std::max(worst, std::abs(sum - target));
                const double mv = magnitude_mu(st.vertices, mu);
                ok = ok && mv <= prev_mu + 1e-12;
                prev_mu = mv;
            }
            const auto& s = red.solution;
            const Complex chord = s.z * std::polar(1.0, s.theta1) + (1.0 - s.z) * std::polar(1.0, s.theta2);
            worst = std::max(worst, std::abs(chord - target));
            const double final_mu = magnitude_mu({s.theta1, s.theta2}, mu);
            ok = ok && final_mu <= magnitude_mu(angles, mu) + 1e-12 && std::isfinite(final_mu);
            ok = ok && s.z >= 0.0 && s.z <= 1.0;
            record(rep, worst, ok && worst <= 1e-8, instance);
        } catch (const std::exception& e) {
            record(rep, std::numeric_limits<double>::quiet_NaN(), false, instance + ": " + e.what());
        }
    }
    return rep;
}

LemmaReport check_chord_min_angle(std::uint64_t seed, int trials) {
    LemmaReport rep;
    rep.name = "chord-min-angle";
    rep.trials = std::max(trials, 0);
    constexpr int kSweep = 360;
    for (int t = 0; t < rep.trials; ++t) {
        auto rng = derived_rng(seed, static_cast<std::uint64_t>(t));
        double r = uniform(rng, 0.0, 1.0);
        if (t % 10 == 0) r = 0.0;
        if (t % 10 == 1) r = 1.0 - std::pow(10.0, -uniform(rng, 2.0, 8.0));
        const double gamma = uniform(rng, -kPi, kPi);
        const Complex p = std::polar(r, gamma);
        const double bound = 2.0 * std::acos(r);

        double worst = 0.0;
        bool ok = std::abs(chord_min_angle(r) - bound) <= 1e-12;
        for (int k = 0; k < kSweep; ++k) {
            const double phi = gamma + kPi / 2.0 + k * kPi / kSweep;
            const Complex u = std::polar(1.0, phi);
            // Endpoints from |p + s u| = 1; the subtended angle from the chord length.
            const double pu = (std::conj(u) * p).real();
            const double disc = std::sqrt(std::max(0.0, pu * pu + 1.0 - r * r));
            const double len = 2.0 * disc;
            const double angle = 2.0 * std::asin(std::min(1.0, len / 2.0));
            const double lib = chord_subtended_angle(p, phi);
            ok = ok && angle >= bound - 1e-9 && std::abs(lib - angle) <= 1e-7;
            if (k == 0) {
                worst = std::max(worst, std::abs(angle - bound));
                ok = ok && std::abs(angle - bound) <= 1e-9;
            }
        }
        std::ostringstream os;
        os.precision(17);
        os << "trial " << t << " seed " << seed << " r " << r << " gamma " << gamma;
        record(rep, worst, ok, os.str());
    }
    return rep;
}

LemmaReport check_appendix_identity(std::uint64_t seed, int trials) {
    LemmaReport rep;
    rep.name = "appendix-identity";
    rep.trials = std::max(trials, 0);
    for (int t = 0; t < rep.trials; ++t) {
        auto rng = derived_rng(seed, static_cast<std::uint64_t>(t));
        double t1 = uniform(rng, -kPi, kPi);
        double t2 = uniform(rng, -kPi, kPi);
        double z = uniform(rng, 0.0, 1.0);
        if (t % 10 == 0) t2 = -t1;
        if (t % 10 == 1) z = 0.0;
        if (t % 10 == 2) z = 1.0;
        const Complex e1 = std::polar(1.0, t1);
        const Complex e2 = std::polar(1.0, t2);
        const Complex w = z * e1 + (1.0 - z) * e2;

        std::ostringstream os;
        os.precision(17);
        os << "trial " << t << " seed " << seed << " theta1 " << t1 << " theta2 " << t2 << " z " << z;
        try {
            const auto sol = chord_solution(t1, t2, w);
            // Phase ansatz: the sign s must make e^{ix}(e^{i theta1} - e^{i theta2}) real and non-negative.
            const Complex ex = std::polar(1.0, sol.x);
            const Complex expected = Complex(0.0, sol.s % 2 ? -1.0 : 1.0) * std::polar(1.0, -(t1 + t2) / 2.0);
            const Complex diff = ex * (e1 - e2);
            double worst = std::abs(ex - expected);
            bool ok = diff.real() >= -1e-12 && std::abs(diff.imag()) <= 1e-10;

            const double zz = sol.z;
            const Complex c1 = zz * std::polar(1.0, sol.theta1) + (1.0 - zz) * std::polar(1.0, sol.theta2);
            worst = std::max(worst, std::abs(c1 - w));
            // Squared form of the off-diagonal constraint.
            const double lhs = zz * (1.0 - zz) * std::norm(std::polar(1.0, sol.theta1) - std::polar(1.0, sol.theta2));
            worst = std::max(worst, std::abs(lhs - (1.0 - std::norm(w))));
            const double one_minus = 1.0 - std::norm(w);
            if (one_minus >= 1e-8) {
                const Complex c2 = std::sqrt(zz * (1.0 - zz)) * std::polar(1.0, sol.x) *
                                   (std::polar(1.0, sol.theta1) - std::polar(1.0, sol.theta2));
                worst = std::max(worst, std::abs(c2 - std::sqrt(one_minus)));
                const auto [ra, rb] = chord_residuals(sol, w);
                worst = std::max({worst, ra, rb});

                // Spectral form e^{i theta1} u1 u1^dagger + e^{i theta2} u2 u2^dagger.
                Eigen::Vector2cd u1(std::sqrt(zz), std::sqrt(1.0 - zz) * ex);
                Eigen::Vector2cd u2(std::sqrt(1.0 - zz), -std::sqrt(zz) * ex);
                const Eigen::Matrix2cd spec = std::polar(1.0, sol.theta1) * u1 * u1.adjoint() +
                                              std::polar(1.0, sol.theta2) * u2 * u2.adjoint();
                const ComplexMatrix tilde = build_tilde_u(w, sol.theta1, sol.theta2);
                worst = std::max(worst, (tilde - ComplexMatrix(spec)).cwiseAbs().maxCoeff());
            }
            ok = ok && worst <= 1e-10;
            record(rep, worst, ok, os.str());
        } catch (const std::exception& e) {
            record(rep, std::numeric_limits<double>::quiet_NaN(), false, os.str() + ": " + e.what());
        }
    }
    return rep;
}

}  // namespace teq
