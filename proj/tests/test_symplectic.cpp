#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "qps/symplectic.hpp"

using namespace qps;

namespace {
constexpr double kPi = std::numbers::pi;

QuadraticForm harmonic_form(int n, double m, double omega, double e) {
    QuadraticForm q;
    q.n = n;
    q.E = e;
    q.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        q.A(k, k) = m * omega * omega;
        q.A(n + k, n + k) = 1.0 / m;
    }
    return q;
}
} // namespace

TEST_CASE("standard symplectic matrix squares to -1") {
    for (int n = 1; n <= 3; ++n) {
        const Eigen::MatrixXd j = standard_symplectic_matrix(n);
        CHECK((j * j + Eigen::MatrixXd::Identity(2 * n, 2 * n)).norm() < 1e-14);
        CHECK((j.transpose() + j).norm() < 1e-14);
    }
}

TEST_CASE("williamson spectrum of a diagonal harmonic form") {
    // A = diag(m w^2, 1/m): nu = w for every mode
    const QuadraticForm q = harmonic_form(3, 2.0, 1.7, 1.0);
    const auto nu = williamson_spectrum(q).nu;
    REQUIRE(nu.size() == 3);
    for (double v : nu) CHECK(v == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("capacity of the harmonic ellipsoid is 2 pi E / omega") {
    const QuadraticForm q = harmonic_form(2, 1.0, 2.0, 3.0);
    CHECK(capacity_quadratic(q) == doctest::Approx(2.0 * kPi * 3.0 / 2.0));
}

TEST_CASE("conjugate section areas match the capacity for isotropic forms") {
    const QuadraticForm q = harmonic_form(3, 1.0, 1.0, 1.5);
    const double c = capacity_quadratic(q);
    for (int k = 0; k < 3; ++k)
        CHECK(conjugate_section_area(q, k) == doctest::Approx(c).epsilon(1e-12));
}

TEST_CASE("coupled planes are rejected for section areas") {
    QuadraticForm q = harmonic_form(2, 1.0, 1.0, 1.0);
    q.A(0, 1) = q.A(1, 0) = 0.3; // x1-x2 coupling
    CHECK_THROWS_AS(conjugate_section_area(q, 0), NotSeparableError);
}

TEST_CASE("non-positive-definite forms have no spectrum") {
    QuadraticForm q = harmonic_form(1, 1.0, 1.0, 1.0);
    q.A(0, 0) = -1.0;
    CHECK_THROWS_AS(williamson_spectrum(q), SpectrumUndefinedError);
}

TEST_CASE("random symplectic matrices satisfy S^T J S = J") {
    for (int n = 1; n <= 3; ++n) {
        const Eigen::MatrixXd j = standard_symplectic_matrix(n);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const Eigen::MatrixXd s = random_symplectic(n, seed);
            CHECK((s.transpose() * j * s - j).norm() < 1e-12);
        }
    }
}

TEST_CASE("spectrum and capacity are symplectic invariants") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 3;
        const int d = 2 * n;
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) m(i, k) = normal(rng);
        QuadraticForm q;
        q.n = n;
        q.E = 1.0;
        q.A = m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(d, d);
        QuadraticForm qc = q;
        const Eigen::MatrixXd s = random_symplectic(n, 9000 + rep);
        qc.A = s.transpose() * q.A * s;

        const auto nu0 = williamson_spectrum(q).nu;
        const auto nu1 = williamson_spectrum(qc).nu;
        for (int k = 0; k < n; ++k)
            CHECK(std::abs(nu0[k] - nu1[k]) / nu0[k] < 1e-9);
        CHECK(std::abs(capacity_quadratic(q) - capacity_quadratic(qc)) /
                  capacity_quadratic(q) <
              1e-9);
    }
}

TEST_CASE("capacity shrinks when the form grows (Loewner monotonicity)") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 20; ++rep) {
        Eigen::MatrixXd m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) m(i, k) = normal(rng);
        QuadraticForm q;
        q.n = 2;
        q.E = 1.0;
        q.A = m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(4, 4);
        QuadraticForm bigger = q;
        bigger.A += 0.3 * Eigen::MatrixXd::Identity(4, 4);
        CHECK(capacity_quadratic(bigger) < capacity_quadratic(q) + 1e-12);
    }
}

TEST_CASE("RS check and blob check agree on Gaussian ground states") {
    // Sigma = (hbar/2) I saturates RS exactly
    CovarianceMatrix cm;
    cm.n = 3;
    cm.sigma = 0.5 * Eigen::MatrixXd::Identity(6, 6);
    const RsCheckResult rs = rs_check(cm, 1.0);
    CHECK(rs.pass);
    CHECK(std::abs(rs.margin) < 1e-14);

    // squeezed below hbar/2 must fail
    CovarianceMatrix squeezed = cm;
    squeezed.sigma(0, 0) = 0.3;
    CHECK_FALSE(rs_check(squeezed, 1.0).pass);

    // the matching quadratic form (oscillator ground state Fermi set)
    const QuadraticForm q = harmonic_form(1, 1.0, 1.0, 0.5);
    const BlobCheckResult blob = quantum_blob_contained(q, 1.0);
    CHECK(blob.pass);
    CHECK(blob.ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectrum sorted descending") {
    QuadraticForm q;
    q.n = 2;
    q.E = 1.0;
    q.A = Eigen::MatrixXd::Zero(4, 4);
    q.A(0, 0) = 4.0;
    q.A(2, 2) = 1.0; // nu_1 = 2
    q.A(1, 1) = 9.0;
    q.A(3, 3) = 1.0; // nu_2 = 3
    const auto nu = williamson_spectrum(q).nu;
    CHECK(nu[0] == doctest::Approx(3.0));
    CHECK(nu[1] == doctest::Approx(2.0));
}
