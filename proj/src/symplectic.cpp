#include "qps/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "qps/errors.hpp"

namespace qps {

void QuadraticForm::validate(double sym_tol) const {
    if (n < 1 || A.rows() != 2 * n || A.cols() != 2 * n)
        throw Error("QuadraticForm: A must be 2n x 2n with n >= 1");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
        throw Error("QuadraticForm: A not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw SpectrumUndefinedError("QuadraticForm: A not positive definite");
    if (!(E > 0.0)) throw Error("QuadraticForm: E must be positive");
}

Eigen::MatrixXd standard_symplectic_matrix(int n) {
    if (n < 1) throw Error("standard_symplectic_matrix: n >= 1 required");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
    return j;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& m, double pair_tol) {
    const int two_n = static_cast<int>(m.rows());
    if (two_n % 2 != 0 || m.cols() != two_n)
        throw SpectrumUndefinedError("symplectic_eigenvalues: matrix must be 2n x 2n");
    const int n = two_n / 2;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pd(0.5 * (m + m.transpose()));
    if (pd.eigenvalues().minCoeff() <= 0.0)
        throw SpectrumUndefinedError("symplectic_eigenvalues: matrix not positive definite");

    Eigen::EigenSolver<Eigen::MatrixXd> es(standard_symplectic_matrix(n) * m);
    if (es.info() != Eigen::Success)
        throw SpectrumUndefinedError("symplectic_eigenvalues: eigensolver failed");

    // eig(J M) = +/- i nu_j; keep positive imaginary parts.
    std::vector<double> nu;
    for (int i = 0; i < two_n; ++i) {
        const auto lam = es.eigenvalues()(i);
        if (std::abs(lam.real()) > pair_tol * scale)
            throw SpectrumUndefinedError(
                "symplectic_eigenvalues: eigenvalue has non-negligible real part");
        if (lam.imag() > 0.0) nu.push_back(lam.imag());
    }
    if (static_cast<int>(nu.size()) != n)
        throw SpectrumUndefinedError("symplectic_eigenvalues: +/- pairing broken");
    std::sort(nu.begin(), nu.end(), std::greater<>());
    return nu;
}

SymplecticSpectrum williamson_spectrum(const QuadraticForm& q) {
    q.validate();
    return SymplecticSpectrum{symplectic_eigenvalues(q.A)};
}

double capacity_quadratic(const QuadraticForm& q) {
    const auto spec = williamson_spectrum(q);
    return 2.0 * std::numbers::pi * q.E / spec.nu.front();
}

double conjugate_section_area(const QuadraticForm& q, int k, double tol) {
    q.validate();
    if (k < 0 || k >= q.n) throw Error("conjugate_section_area: axis out of range");
    const int a = k, b = k + q.n;
    const double scale = std::max(1.0, q.A.cwiseAbs().maxCoeff());
    for (int j = 0; j < 2 * q.n; ++j) {
        if (j == a || j == b) continue;
        if (std::abs(q.A(a, j)) > tol * scale || std::abs(q.A(b, j)) > tol * scale)
            throw NotSeparableError("conjugate_section_area: plane couples to other axes");
    }
    // ellipse (A_aa x^2 + A_bb p^2)/2 <= E has area 2 pi E / sqrt(A_aa A_bb)
    return 2.0 * std::numbers::pi * q.E / std::sqrt(q.A(a, a) * q.A(b, b));
}

RsCheckResult rs_check(const CovarianceMatrix& sigma, double hbar) {
    sigma.validate(1e-9);
    const auto nu = symplectic_eigenvalues(sigma.sigma);
    const double margin = nu.back() - 0.5 * hbar;
    return RsCheckResult{margin >= -1e-12, margin};
}

BlobCheckResult quantum_blob_contained(const QuadraticForm& q, double hbar) {
    const double c = capacity_quadratic(q);
    const double half_h = std::numbers::pi * hbar;
    return BlobCheckResult{c >= half_h * (1.0 - 1e-12), c / half_h};
}

Eigen::MatrixXd random_symplectic(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.5);
    Eigen::MatrixXd s(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) s(i, j) = s(j, i) = gauss(rng);
    const Eigen::MatrixXd gen = standard_symplectic_matrix(n) * s;
    return gen.exp();
}

} // namespace qps
