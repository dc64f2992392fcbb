// Acceptance criteria 1-8. One PASS/FAIL line per criterion, details indented below it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "support.hpp"
#include "teq/bounds.hpp"
#include "teq/channel.hpp"
#include "teq/measure.hpp"
#include "teq/oracle.hpp"
#include "teq/random.hpp"
#include "teq/single_vector.hpp"

using namespace teq;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void fail_if(bool bad, const std::string& why) {
        if (bad) {
            pass = false;
            details.push_back("violation: " + why);
        }
    }
    void note(const std::string& line) { details.push_back(line); }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double depolarizing_value(int n, double q) { return std::acos(std::sqrt(q + (1.0 - q) / (n * n))); }

Outcome depolarizing_exact() {
    Outcome out;
    double worst_exact = 0.0;
    double worst_upper = 0.0;
    double worst_lower = 0.0;
    int cases = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {2, 3, 4}) {
        for (double q : {-0.1, 0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
            const double q_valid = std::max(q, -1.0 / (n * n - 1.0));
            const auto c = depolarizing_quantum(n, q_valid);
            const double closed = depolarizing_value(n, q_valid);
            const auto exact = exact_class_c(c);
            const double upper = upper_bound(c, Flavor::Max).value;
            const double lower = lower_bound(c, Flavor::Max).value;
            ++cases;
            if (!exact) {
                out.fail_if(true, fmt("n=%d q=%g not recognised as class C", n, q_valid));
                continue;
            }
            worst_exact = std::max(worst_exact, std::abs(*exact - closed));
            worst_upper = std::max(worst_upper, std::abs(upper - closed));
            worst_lower = std::max(worst_lower, std::abs(lower - closed));
            out.fail_if(std::abs(*exact - closed) > 1e-12, fmt("n=%d q=%g exact %.17g vs %.17g", n, q_valid, *exact, closed));
            out.fail_if(std::abs(upper - closed) > 1e-9, fmt("n=%d q=%g upper %.17g vs %.17g", n, q_valid, upper, closed));
            out.fail_if(std::abs(lower - closed) > 1e-5, fmt("n=%d q=%g lower %.17g vs %.17g", n, q_valid, lower, closed));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.fail_if(secs >= 60.0, fmt("runtime %.1f s", secs));
    out.note(fmt("%d cases; max deviation exact %.2e, upper %.2e, lower %.2e; %.1f s", cases, worst_exact, worst_upper,
                 worst_lower, secs));
    return out;
}

Outcome oracle_sandwich() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_below = -1.0;
    double worst_above = -1.0;
    for (int i = 0; i < 20; ++i) {
        auto rng = derived_rng(2024, static_cast<std::uint64_t>(i));
        const auto c = random_channel(2, 2, rng);
        const double lo = lower_bound(c, Flavor::Max).value;
        const double hi = upper_bound(c, Flavor::Max).value;
        // d' = d + 1 covers the padded witness the upper bound may use.
        const double brute = brute_channel(c, Flavor::Max, c.count() + 1).value;
        worst_below = std::max(worst_below, lo - brute);
        worst_above = std::max(worst_above, brute - hi);
        out.fail_if(brute < lo - 1e-4 || brute > hi + 1e-4,
                    fmt("channel %d: lower %.9f brute %.9f upper %.9f", i, lo, brute, hi));
    }
    out.note(fmt("20 random channels, d' = 3: max(lower - brute) %.2e, max(brute - upper) %.2e", worst_below, worst_above));
    for (double q : {0.9, 0.5}) {
        const auto c = depolarizing_quantum(2, q);
        const double exact = depolarizing_value(2, q);
        const double brute = brute_channel(c, Flavor::Max, c.count()).value;
        out.fail_if(std::abs(brute - exact) > 1e-4, fmt("depolarizing q=%g: brute %.9f exact %.9f", q, brute, exact));
        out.note(fmt("depolarizing n=2 q=%g, d' = 4: brute %.10f, closed form %.10f", q, brute, exact));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.fail_if(secs >= 300.0, fmt("runtime %.1f s", secs));
    out.note(fmt("%.1f s", secs));
    return out;
}

Outcome single_vector_exactness() {
    Outcome out;
    double worst_max = 0.0;
    int at_lower = 0;
    for (int i = 0; i < 100; ++i) {
        auto rng = derived_rng(77, static_cast<std::uint64_t>(i));
        const int r = 2 + i % 3;
        const ComplexVector a = random_unit_vector(r, rng);
        const ComplexVector b = random_unit_vector(r, rng);
        const Overlap w = Overlap::make(a.dot(b));
        const OracleBudget budget{16, 3000, static_cast<std::uint64_t>(i), 1e-10};
        const double bm = brute_single_vector(a, b, Flavor::Max, budget).value;
        const double bs = brute_single_vector(a, b, Flavor::Sum, budget).value;
        worst_max = std::max(worst_max, std::abs(bm - f_max(w)));
        out.fail_if(std::abs(bm - f_max(w)) > 1e-5, fmt("pair %d: max %.12f vs %.12f", i, bm, f_max(w)));
        out.fail_if(bs < f_sum_lower(w) - 1e-6 || bs > f_sum_upper(w) + 1e-6,
                    fmt("pair %d: sum %.12f outside [%.12f, %.12f]", i, bs, f_sum_lower(w), f_sum_upper(w)));
        if (std::abs(bs - f_sum_lower(w)) < 1e-6) ++at_lower;
    }
    out.note(fmt("100 pairs, dims 2-4: max |brute - acos Re w| %.2e; sum flavor at 2 acos|w| in %d/100", worst_max,
                 at_lower));
    return out;
}

Outcome erasure_ratio() {
    Outcome out;
    const auto r = erasure_compare(2, 1e-4);
    out.fail_if(std::abs(r.ratio - std::sqrt(1.5)) > 1e-3, fmt("n=2 delta=1e-4 ratio %.6f", r.ratio));
    out.note(fmt("n=2 delta=1e-4: ratio %.6f (sqrt 1.5 = %.6f)", r.ratio, std::sqrt(1.5)));
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const double expect = std::sqrt((n + 1.0) / n);
        const auto near = erasure_compare(n, 1e-8);
        const auto limit = erasure_compare(n, 0.0);
        worst = std::max({worst, std::abs(near.ratio - expect), std::abs(limit.ratio - expect)});
        out.fail_if(std::abs(near.ratio - expect) > 1e-3, fmt("n=%d delta=1e-8 ratio %.6f vs %.6f", n, near.ratio, expect));
        out.fail_if(!limit.limit || std::abs(limit.ratio - expect) > 1e-3, fmt("n=%d delta=0 limit report", n));
    }
    out.note(fmt("n = 2..8, delta -> 0: max |ratio - sqrt((n+1)/n)| %.2e", worst));
    return out;
}

Outcome cascade_scaling() {
    Outcome out;
    for (int k : {4, 9, 16}) {
        const auto r = cascade_analysis(2, 0.999, k);
        const double rel = std::abs(r.ratio / r.sqrt_k - 1.0);
        out.fail_if(rel > 0.02, fmt("q=0.999 k=%d ratio %.5f vs %.5f", k, r.ratio, r.sqrt_k));
        out.note(fmt("q=0.999 k=%2d: combined/single %.5f, sqrt k %.1f, deviation %.3f%%", k, r.ratio, r.sqrt_k, 100 * rel));
    }
    for (int k : {4, 9, 16}) {
        const auto r = cascade_analysis(2, 0.5, k);
        const double rel = std::abs(r.ratio / r.sqrt_k - 1.0);
        if (k == 4) out.fail_if(rel <= 0.05, fmt("q=0.5 k=4 deviation %.3f%% not above 5%%", 100 * rel));
        out.note(fmt("q=0.5   k=%2d: combined/single %.5f, sqrt k %.1f, deviation %.1f%% (large-noise regime)", k, r.ratio,
                     r.sqrt_k, 100 * rel));
    }
    return out;
}

Outcome lemma_suites() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    for (auto check : {check_polygon_reduction, check_chord_min_angle, check_appendix_identity}) {
        const auto r = check(1, 1000);
        out.fail_if(r.trials != 1000 || !r.passed(),
                    fmt("%s: %d violations; first %s", r.name.c_str(), r.violations, r.first_failure.value_or("-").c_str()));
        out.note(fmt("%-20s %d trials, %d violations, max residual %.2e", r.name.c_str(), r.trials, r.violations,
                     r.max_residual));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.fail_if(secs >= 60.0, fmt("runtime %.1f s", secs));
    out.note(fmt("%.1f s", secs));
    return out;
}

MuWeights random_weights(int r, Rng& rng) {
    std::vector<double> w(static_cast<size_t>(r));
    for (auto& x : w) x = uniform(rng, 0.0, 1.0);
    std::sort(w.rbegin(), w.rend());
    w[0] = std::max(w[0], 0.1);
    return MuWeights::make(w);
}

Outcome structural_properties() {
    Outcome out;

    // Triangle inequality.
    double worst_tri = -1.0;
    for (int i = 0; i < 1000; ++i) {
        auto rng = derived_rng(7001, static_cast<std::uint64_t>(i));
        const int r = 2 + i % 4;
        const ComplexMatrix u = random_unitary(r, rng);
        const ComplexMatrix v = random_unitary(r, rng);
        const auto mu = random_weights(r, rng);
        const double slack = mu_norm(u * v, mu) - mu_norm(u, mu) - mu_norm(v, mu);
        worst_tri = std::max(worst_tri, slack);
        out.fail_if(slack > 1e-12, fmt("triangle pair %d exceeds by %.3e", i, slack));
    }
    out.note(fmt("triangle inequality: 1000 pairs, dims 2-5, max(|UV| - |U| - |V|) %.3e", worst_tri));

    // Conjugation of the first Kraus operator, bounds compared as stated.
    int disagreements = 0;
    double worst_conj = 0.0;
    OptimizerConfig cfg;
    for (int i = 0; i < 20; ++i) {
        auto rng = derived_rng(7002, static_cast<std::uint64_t>(i));
        const int n = 2 + i % 2;
        const auto c = random_channel(n, 2, rng);
        const double lo = lower_bound(c, Flavor::Max, cfg).value;
        const double hi = upper_bound(c, Flavor::Max, cfg).value;
        for (int k = 0; k < 5; ++k) {
            const auto conj = conjugate_first(c, random_unitary(n, rng));
            const double dl = std::abs(lower_bound(conj, Flavor::Max, cfg).value - lo);
            const double du = std::abs(upper_bound(conj, Flavor::Max, cfg).value - hi);
            worst_conj = std::max({worst_conj, dl, du});
            if (dl > 1e-5 || du > 1e-5) ++disagreements;
        }
    }
    out.fail_if(disagreements > 0, fmt("bounds changed under first-operator conjugation in %d/100 cases (max %.3f)",
                                       disagreements, worst_conj));
    {
        const double u = 0.3;
        const auto flip = bit_flip(u);
        const auto conj = conjugate_first(flip, weyl(2, 1, 0));
        out.note(fmt("conjugation counterexample: bit flip u=0.3, Q = X gives {sqrt(0.7) I, sqrt(0.3) I}; "
                     "upper %.6f -> %.6f, exact %.6f -> %s",
                     upper_bound(flip, Flavor::Max, cfg).value, upper_bound(conj, Flavor::Max, cfg).value,
                     *exact_class_c(flip), exact_class_c(conj) ? "class C" : "not class C"));
    }
    // The invariance that does hold: the completion minimum for the presented Kraus set.
    double worst_fixed = 0.0;
    for (int i = 0; i < 4; ++i) {
        auto rng = derived_rng(7003, static_cast<std::uint64_t>(i));
        const auto c = random_channel(2, 2, rng);
        const OracleBudget budget{16, 3000, 0, 1e-10};
        const double base = brute_completion(c, Flavor::Max, 2, budget).value;
        for (int k = 0; k < 2; ++k) {
            const auto conj = conjugate_first(c, random_unitary(2, rng));
            worst_fixed = std::max(worst_fixed, std::abs(brute_completion(conj, Flavor::Max, 2, budget).value - base));
        }
    }
    out.note(fmt("fixed-representation completion minimum: 4 channels x 2 conjugators, max difference %.2e (informational)",
                 worst_fixed));

    // Extension reconstruction.
    double worst_ext = 0.0;
    double worst_cert = -1.0;
    int extensions = 0;
    for (int i = 0; i < 20; ++i) {
        auto rng = derived_rng(7004, static_cast<std::uint64_t>(i));
        const int n = 2 + i % 3;
        const int d = 1 + i % 4;
        const auto c = random_channel(n, d, rng);
        const auto up = upper_bound(c, Flavor::Max, cfg);
        const auto ext = construct_extension(c, up.v);
        ++extensions;
        worst_cert = std::max(worst_cert, max_norm(ext.u) - up.value);
        out.fail_if(max_norm(ext.u) > up.value + 1e-9, fmt("extension %d exceeds the upper bound", i));
        for (int k = 0; k < 20; ++k) {
            const ComplexMatrix rho = random_density(n, rng);
            ComplexMatrix embedded = ComplexMatrix::Zero(ext.u.rows(), ext.u.rows());
            embedded.topLeftCorner(n, n) = rho;
            const ComplexMatrix reduced =
                teq::testing::partial_trace_first(ext.u * embedded * ext.u.adjoint(), ext.d_prime, n);
            const double res = (reduced - c.apply(rho)).norm();
            worst_ext = std::max(worst_ext, res);
            out.fail_if(res >= 1e-9, fmt("extension %d state %d residual %.3e", i, k, res));
        }
    }
    out.note(fmt("extension reconstruction: %d extensions x 20 states, max residual %.2e; max(|U|max - upper) %.2e",
                 extensions, worst_ext, worst_cert));

    // Zero padding.
    double worst_pad = 0.0;
    for (int i = 0; i < 10; ++i) {
        auto rng = derived_rng(7005, static_cast<std::uint64_t>(i));
        const auto c = random_channel(2 + i % 2, 2, rng);
        for (int extra : {1, 2}) {
            const auto padded = pad_zero(c, c.count() + extra);
            for (Flavor f : {Flavor::Max, Flavor::Sum}) {
                const double dl = std::abs(lower_bound(padded, f, cfg).value - lower_bound(c, f, cfg).value);
                const double du = std::abs(upper_bound(padded, f, cfg).value - upper_bound(c, f, cfg).value);
                worst_pad = std::max({worst_pad, dl, du});
                out.fail_if(dl > 1e-5 || du > 1e-5,
                            fmt("padding channel %d +%d %s: lower diff %.3e upper diff %.3e", i, extra, flavor_name(f), dl, du));
            }
        }
    }
    out.note(fmt("zero padding: 10 channels x {+1, +2} x both flavors, max bound change %.2e", worst_pad));
    return out;
}

Outcome teur_formula() {
    Outcome out;
    struct Case {
        double eps;
        double hbar;
        std::vector<double> energies;
        std::vector<Complex> amps;
        double expect;
    };
    const double h = 1.054571817e-34;
    const std::vector<Case> cases{
        {0.0, 1.0, {1.0}, {Complex(1.0, 0.0)}, 1.0 / 0.725},
        {0.25, 1.0, {1.0, 3.0}, {Complex(std::sqrt(0.5), 0.0), Complex(0.0, std::sqrt(0.5))}, 0.5 / (0.725 * 2.0)},
        {1.0, 1.0, {2.0}, {Complex(1.0, 0.0)}, 0.0},
        {0.81, h, {1.0, -3.0}, {Complex(0.5, 0.0), Complex(0.0, -std::sqrt(0.75))}, 0.1 * h / (0.725 * 2.5)},
        {0.36, 2.0, {-4.0, 0.0, 2.0}, {Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(std::sqrt(0.5), 0.0)}, 0.8 / (0.725 * 2.0)},
    };
    double worst = 0.0;
    for (size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        TeurParams p;
        p.epsilon = c.eps;
        p.hbar = c.hbar;
        const double got = teur_min_time(p, c.energies, c.amps);
        const double err = std::abs(got - c.expect) / std::max(1.0, std::abs(c.expect));
        worst = std::max(worst, err);
        out.fail_if(err > 1e-12, fmt("case %zu: %.17g vs %.17g", i, got, c.expect));
    }
    out.note(fmt("%zu hand-computed cases, max relative deviation %.2e", cases.size(), worst));
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "depolarizing exact value", depolarizing_exact},
        {2, "oracle sandwich", oracle_sandwich},
        {3, "single-vector exactness", single_vector_exactness},
        {4, "erasure ratio", erasure_ratio},
        {5, "cascade scaling", cascade_scaling},
        {6, "lemma suites", lemma_suites},
        {7, "structural properties", structural_properties},
        {8, "uncertainty-relation time", teur_formula},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.note(std::string("exception: ") + e.what());
        }
        std::printf("criterion %d %-28s %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL");
        size_t shown = 0;
        for (const auto& d : o.details) {
            if (d.rfind("violation", 0) == 0 && ++shown > 5) continue;
            std::printf("    %s\n", d.c_str());
        }
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
