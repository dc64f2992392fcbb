#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "teq/matrix.hpp"
#include "teq/random.hpp"

using namespace teq;
using teq::testing::multiset_distance;
using teq::testing::reference_eigenvalues;

TEST_CASE("spectrum agrees with the characteristic-polynomial roots") {
    for (int n = 2; n <= 5; ++n) {
        for (std::uint64_t t = 0; t < 10; ++t) {
            auto rng = derived_rng(100 + n, t);
            const ComplexMatrix m = random_matrix(n, n, rng);
            const auto got = spectrum(m);
            REQUIRE(got.size() == static_cast<size_t>(n));
            CHECK(multiset_distance(got, reference_eigenvalues(m)) < 1e-8);
            for (size_t i = 1; i < got.size(); ++i) CHECK_FALSE(precedes(got[i], got[i - 1]));
        }
    }
}

TEST_CASE("schur form reconstructs the matrix with a sorted triangular factor") {
    auto rng = derived_rng(7, 0);
    for (int n = 1; n <= 5; ++n) {
        const ComplexMatrix m = random_matrix(n, n, rng);
        const auto sf = schur(m);
        CHECK(unitarity_residual(sf.q) < 1e-12);
        CHECK((sf.q * sf.t * sf.q.adjoint() - m).norm() < 1e-12);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) CHECK(std::abs(sf.t(i, j)) < 1e-13);
        }
        for (int i = 1; i < n; ++i) CHECK_FALSE(precedes(sf.t(i, i), sf.t(i - 1, i - 1)));
    }
}

TEST_CASE("schur rejects non-finite input") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(schur(m));
    CHECK_THROWS_AS(spectrum(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("principal angle lies in (-pi, pi]") {
    CHECK(principal_angle(Complex(-1.0, 0.0)) == doctest::Approx(std::numbers::pi));
    CHECK(principal_angle(Complex(-1.0, -0.0)) == doctest::Approx(std::numbers::pi));
    CHECK(principal_angle(std::polar(1.0, -std::numbers::pi + 1e-13)) == doctest::Approx(std::numbers::pi));
    CHECK(principal_angle(Complex(0.0, -1.0)) == doctest::Approx(-std::numbers::pi / 2));
}

TEST_CASE("eigenangles of a diagonal unitary") {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = std::polar(1.0, 0.3);
    u(1, 1) = std::polar(1.0, -1.2);
    u(2, 2) = -1.0;
    const auto a = eigenangles(u);
    REQUIRE(a.size() == 3);
    CHECK(a[0] == doctest::Approx(std::numbers::pi));
    CHECK(a[1] == doctest::Approx(1.2));
    CHECK(a[2] == doctest::Approx(0.3));
    CHECK_THROWS_AS(eigenangles(2.0 * u), std::invalid_argument);
}

TEST_CASE("eigenangles of Haar unitaries match the reference") {
    for (std::uint64_t t = 0; t < 20; ++t) {
        auto rng = derived_rng(11, t);
        const int n = 2 + static_cast<int>(t % 4);
        const ComplexMatrix u = random_unitary(n, rng);
        const auto got = eigenangles(u);
        const auto ref = teq::testing::reference_angles(u);
        for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-8));
    }
}

TEST_CASE("normality test") {
    auto rng = derived_rng(3, 1);
    CHECK(is_normal(random_unitary(4, rng)));
    CHECK(is_normal(random_hermitian(3, rng, 1.0)));
    ComplexMatrix jordan = ComplexMatrix::Identity(2, 2);
    jordan(0, 1) = 1.0;
    CHECK_FALSE(is_normal(jordan));
}

TEST_CASE("hermitian parameter layout") {
    const std::vector<double> p{1.0, 2.0, 0.5, -0.25};
    const ComplexMatrix h = hermitian_from_params(p, 2);
    CHECK(h(0, 0) == Complex(1.0, 0.0));
    CHECK(h(1, 1) == Complex(2.0, 0.0));
    CHECK(h(0, 1) == Complex(0.5, -0.25));
    CHECK(h(1, 0) == Complex(0.5, 0.25));
    CHECK_THROWS(hermitian_from_params(std::vector<double>(3, 0.0), 2));
}

TEST_CASE("exp(i h) is unitary and matches the Taylor series") {
    for (std::uint64_t t = 0; t < 10; ++t) {
        auto rng = derived_rng(21, t);
        const int n = 2 + static_cast<int>(t % 3);
        const ComplexMatrix h = random_hermitian(n, rng, 2.5);
        const ComplexMatrix u = exp_i_hermitian(h);
        CHECK(unitarity_residual(u) < 1e-13);
        CHECK((u - teq::testing::taylor_exp_i(h)).norm() < 1e-11);
    }
}

TEST_CASE("unitary completion and orthogonal complement") {
    auto rng = derived_rng(5, 5);
    const ComplexVector v = random_unit_vector(4, rng);
    const ComplexMatrix u = complete_to_unitary(v);
    CHECK(unitarity_residual(u) < 1e-13);
    CHECK((u.col(0) - v).norm() < 1e-14);

    ComplexVector e = ComplexVector::Zero(3);
    e(2) = Complex(0.0, 1.0);
    CHECK((complete_to_unitary(e).col(0) - e).norm() < 1e-15);

    const ComplexMatrix g = random_unitary(6, rng).leftCols(2);
    const ComplexMatrix perp = orthogonal_complement(g);
    REQUIRE(perp.cols() == 4);
    CHECK((g.adjoint() * perp).norm() < 1e-13);
    CHECK((perp.adjoint() * perp - ComplexMatrix::Identity(4, 4)).norm() < 1e-13);
}
