#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "teq/measure.hpp"
#include "teq/random.hpp"

using namespace teq;

TEST_CASE("weights must be non-increasing, non-negative and not all zero") {
    CHECK_NOTHROW(MuWeights::make({1.0, 0.5, 0.5, 0.0}));
    CHECK_THROWS(MuWeights::make({}));
    CHECK_THROWS(MuWeights::make({0.5, 1.0}));
    CHECK_THROWS(MuWeights::make({1.0, -0.1}));
    CHECK_THROWS(MuWeights::make({0.0, 0.0}));
    CHECK(MuWeights::max_weights(3).values() == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(MuWeights::sum_weights(2).values() == std::vector<double>{1.0, 1.0});
}

TEST_CASE("mu-norm sorts signed angles by magnitude") {
    const std::vector<double> angles{-0.2, 1.5, -2.0, 0.1};
    const auto mu = MuWeights::make({3.0, 2.0, 1.0});
    CHECK(mu_norm_of_angles(angles, mu) == doctest::Approx(3.0 * 2.0 + 2.0 * 1.5 + 1.0 * 0.2));
}

TEST_CASE("max and sum norms of a diagonal unitary") {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = std::polar(1.0, 0.4);
    u(1, 1) = std::polar(1.0, -2.5);
    u(2, 2) = 1.0;
    CHECK(max_norm(u) == doctest::Approx(2.5));
    CHECK(sum_norm(u) == doctest::Approx(2.9));
    CHECK(mu_norm(u, MuWeights::make({1.0, 0.5, 0.5, 0.5})) == doctest::Approx(2.5 + 0.2));
    CHECK(max_norm(ComplexMatrix::Identity(4, 4)) == 0.0);
    CHECK(max_norm(-ComplexMatrix::Identity(2, 2)) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS(max_norm(2.0 * u));
}

TEST_CASE("norms are invariant under unitary conjugation and inversion") {
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = derived_rng(41, t);
        const int n = 2 + static_cast<int>(t % 4);
        const ComplexMatrix u = random_unitary(n, rng);
        const ComplexMatrix w = random_unitary(n, rng);
        const ComplexMatrix conj = w * u * w.adjoint();
        CHECK(max_norm(conj) == doctest::Approx(max_norm(u)).epsilon(1e-9));
        CHECK(sum_norm(conj) == doctest::Approx(sum_norm(u)).epsilon(1e-9));
        CHECK(sum_norm(u.adjoint()) == doctest::Approx(sum_norm(u)).epsilon(1e-9));
        CHECK(sum_norm(u) == doctest::Approx(teq::testing::reference_sum_angle(u)).epsilon(1e-8));
    }
}

TEST_CASE("triangle inequality on products of unitaries") {
    const auto mu = MuWeights::make({1.0, 0.6, 0.3});
    for (std::uint64_t t = 0; t < 200; ++t) {
        auto rng = derived_rng(43, t);
        const int n = 2 + static_cast<int>(t % 4);
        const ComplexMatrix u = random_unitary(n, rng);
        const ComplexMatrix v = random_unitary(n, rng);
        CHECK(mu_norm(u * v, mu) <= mu_norm(u, mu) + mu_norm(v, mu) + 1e-12);
        CHECK(max_norm(u * v) <= max_norm(u) + max_norm(v) + 1e-12);
    }
}

TEST_CASE("uncertainty relation minimum time") {
    // Two levels at energies +-2 with equal weight: mean |E| = 2.
    const std::vector<double> energies{2.0, -2.0};
    const std::vector<Complex> amps{Complex(1.0 / std::sqrt(2.0), 0.0), Complex(0.0, 1.0 / std::sqrt(2.0))};
    TeurParams p;
    p.epsilon = 0.25;
    CHECK(teur_min_time(p, energies, amps) == doctest::Approx(0.5 / (0.725 * 2.0)).epsilon(1e-14));
    p.epsilon = 1.0;
    CHECK(teur_min_time(p, energies, amps) == 0.0);
    p.epsilon = 1.5;
    CHECK_THROWS(teur_min_time(p, energies, amps));
    p.epsilon = 0.0;
    const std::vector<Complex> bad{Complex(1.0, 0.0), Complex(1.0, 0.0)};
    CHECK_THROWS(teur_min_time(p, energies, bad));
}
