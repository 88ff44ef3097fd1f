#ifndef QPS_SYMPLECTIC_HPP
#define QPS_SYMPLECTIC_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qps/field.hpp"

namespace qps {

// Sublevel set {z : z^T A z / 2 <= E} in (x..., p...) ordering.
struct QuadraticForm {
    Eigen::MatrixXd A;
    double E = 1.0;
    int n = 0; // degrees of freedom; A is 2n x 2n

    void validate(double sym_tol = 1e-12) const;
};

struct SymplecticSpectrum {
    std::vector<double> nu; // sorted descending, n positive values
};

// J = [[0, I], [-I, 0]]; J^2 = -1.
Eigen::MatrixXd standard_symplectic_matrix(int n);

// Symplectic (Williamson) eigenvalues of a symmetric positive-definite
// matrix: moduli of the imaginary parts of eig(J M), deduplicated from
// the +/- i nu pairs. Throws SpectrumUndefinedError if M is not positive
// definite or the pairing is broken beyond tolerance.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& m,
                                           double pair_tol = 1e-10);

SymplecticSpectrum williamson_spectrum(const QuadraticForm& q);

// Linear (Gromov) capacity of the ellipsoid z^T A z / 2 <= E:
// c = 2 pi E / nu_max(A).
double capacity_quadratic(const QuadraticForm& q);

// Area of the section with the (x_k, p_k) plane, 0-based k in [0, n).
// Requires the plane to be decoupled (off-block entries below tol);
// throws NotSeparableError otherwise.
double conjugate_section_area(const QuadraticForm& q, int k, double tol = 1e-12);

struct RsCheckResult {
    bool pass = false;
    double margin = 0.0; // min nu(Sigma) - hbar/2
};

// Robertson-Schrodinger condition in the standard form: all symplectic
// eigenvalues of Sigma >= hbar/2.
RsCheckResult rs_check(const CovarianceMatrix& sigma, double hbar);

struct BlobCheckResult {
    bool pass = false;
    double ratio = 0.0; // c / (h/2)
};

// Quantum-blob condition c(Omega) >= h/2 = pi*hbar for a quadratic set.
BlobCheckResult quantum_blob_contained(const QuadraticForm& q, double hbar);

// Random symplectic matrix exp(J S), S symmetric; used by invariance
// checks and the verification suites.
Eigen::MatrixXd random_symplectic(int n, std::uint64_t seed);

} // namespace qps

#endif
