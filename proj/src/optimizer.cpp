#include "teq/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "teq/random.hpp"

namespace teq {

namespace {

struct Simplex {
    std::vector<std::vector<double>> points;
    std::vector<double> values;
};

double simplex_diameter(const Simplex& s) {
    double diam = 0.0;
    for (size_t i = 1; i < s.points.size(); ++i) {
        for (size_t k = 0; k < s.points[i].size(); ++k) {
            diam = std::max(diam, std::abs(s.points[i][k] - s.points[0][k]));
        }
    }
    return diam;
}

// One Nelder-Mead descent from x0; stops on diameter < tol or when the budget runs out.
LocalResult nelder_mead_once(const RealObjective& f, const std::vector<double>& x0, double step, int max_evals,
                             double tol) {
    const size_t n = x0.size();
    const double dn = static_cast<double>(std::max<size_t>(n, 2));
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / dn;
    const double rho = 0.75 - 1.0 / (2.0 * dn);
    const double sigma = 1.0 - 1.0 / dn;

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    Simplex s;
    s.points.push_back(x0);
    s.values.push_back(eval(x0));
    for (size_t k = 0; k < n; ++k) {
        auto x = x0;
        x[k] += step;
        s.points.push_back(x);
        s.values.push_back(eval(x));
    }

    std::vector<size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return s.values[a] < s.values[b]; });
        Simplex sorted;
        for (auto i : order) {
            sorted.points.push_back(std::move(s.points[i]));
            sorted.values.push_back(s.values[i]);
        }
        s = std::move(sorted);
    };

    bool converged = false;
    while (true) {
        sort_simplex();
        if (simplex_diameter(s) < tol) {
            converged = true;
            break;
        }
        if (evals >= max_evals) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < n; ++k) centroid[k] += s.points[i][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto along = [&](double coef) {
            std::vector<double> x(n);
            for (size_t k = 0; k < n; ++k) x[k] = centroid[k] + coef * (s.points[n][k] - centroid[k]);
            return x;
        };

        auto xr = along(-alpha);
        const double fr = eval(xr);
        if (fr < s.values[0]) {
            auto xe = along(-alpha * gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                s.points[n] = std::move(xe);
                s.values[n] = fe;
            } else {
                s.points[n] = std::move(xr);
                s.values[n] = fr;
            }
            continue;
        }
        if (fr < s.values[n - 1]) {
            s.points[n] = std::move(xr);
            s.values[n] = fr;
            continue;
        }
        const bool outside = fr < s.values[n];
        auto xc = along(outside ? -alpha * rho : rho);
        const double fc = eval(xc);
        if (fc < (outside ? fr : s.values[n])) {
            s.points[n] = std::move(xc);
            s.values[n] = fc;
            continue;
        }
        for (size_t i = 1; i <= n; ++i) {
            for (size_t k = 0; k < n; ++k) s.points[i][k] = s.points[0][k] + sigma * (s.points[i][k] - s.points[0][k]);
            s.values[i] = eval(s.points[i]);
        }
    }
    return LocalResult{s.points[0], s.values[0], evals, converged, simplex_diameter(s)};
}

}  // namespace

LocalResult nelder_mead(const RealObjective& f, std::vector<double> x0, double step, int max_evals, double tol) {
    LocalResult best = nelder_mead_once(f, x0, step, max_evals, tol);
    int used = best.evaluations;
    double restart_step = step;
    while (used < max_evals && best.converged) {
        restart_step = std::max(restart_step * 0.5, 100.0 * tol);
        auto next = nelder_mead_once(f, best.x, restart_step, max_evals - used, tol);
        used += next.evaluations;
        const bool improved = next.value < best.value - 1e-15;
        if (next.value <= best.value) {
            best.x = std::move(next.x);
            best.value = next.value;
        }
        best.converged = next.converged;
        best.diameter = next.diameter;
        if (!improved && next.converged) break;
    }
    best.evaluations = used;
    return best;
}

bool better_candidate(double va, std::span<const double> a, double vb, std::span<const double> b) {
    if (va != vb) return va < vb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

ComplexVector project_direction(const ComplexVector& v, NormConstraint mode) {
    const double nrm = v.norm();
    if (mode == NormConstraint::Sphere) {
        if (nrm < 1e-300) return ComplexVector::Unit(v.size(), 0);
        return v / nrm;
    }
    return nrm > 1.0 ? ComplexVector(v / nrm) : v;
}

namespace {

ComplexVector to_complex(std::span<const double> x, int d) {
    ComplexVector v(d);
    for (int j = 0; j < d; ++j) v(j) = Complex(x[static_cast<size_t>(j)], x[static_cast<size_t>(d + j)]);
    return v;
}

std::vector<double> to_real(const ComplexVector& v) {
    const auto d = static_cast<size_t>(v.size());
    std::vector<double> x(2 * d);
    for (size_t j = 0; j < d; ++j) {
        x[j] = v(static_cast<Eigen::Index>(j)).real();
        x[d + j] = v(static_cast<Eigen::Index>(j)).imag();
    }
    return x;
}

}  // namespace

DirectionSearchResult optimize_direction(const DirectionObjective& objective, int d, NormConstraint mode,
                                         const OptimizerConfig& config) {
    if (d < 1) throw std::invalid_argument("optimize_direction: d must be positive");
    const RealObjective f = [&](std::span<const double> x) { return objective(project_direction(to_complex(x, d), mode)); };

    std::vector<std::vector<double>> starts;
    for (int j = 0; j < d; ++j) starts.push_back(to_real(ComplexVector::Unit(d, j)));
    for (int i = 0; i < std::max(config.restarts, 0); ++i) {
        auto rng = derived_rng(config.seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> gauss(0.0, 1.0);
        ComplexVector v(d);
        for (int j = 0; j < d; ++j) v(j) = Complex(gauss(rng), gauss(rng));
        v /= v.norm();
        if (mode == NormConstraint::Ball) v *= std::pow(uniform(rng, 0.0, 1.0), 1.0 / (2.0 * d));
        starts.push_back(to_real(v));
    }

    DirectionSearchResult out;
    std::vector<double> best_x;
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& x0 : starts) {
        auto local = nelder_mead(f, x0, 0.25, config.max_evals, config.tol);
        // Report the projected point, which is what the objective actually saw.
        auto projected = to_real(project_direction(to_complex(local.x, d), mode));
        out.evaluations += local.evaluations;
        out.converged_starts += local.converged ? 1 : 0;
        out.worst_diameter = std::max(out.worst_diameter, local.diameter);
        if (best_x.empty() || better_candidate(local.value, projected, best_value, best_x)) {
            best_value = local.value;
            best_x = std::move(projected);
        }
    }
    out.starts = static_cast<int>(starts.size());
    out.v = to_complex(best_x, d);
    out.value = best_value;
    return out;
}

}  // namespace teq
