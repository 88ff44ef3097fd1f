#include "qps/field.hpp"

#include <cmath>

#include "qps/diffops.hpp"

namespace qps {

double WaveField::norm_squared() const {
    KahanSum s;
    for (const auto& z : psi) s.add(std::norm(z));
    return s.value() * grid.cell_volume();
}

WaveField WaveField::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw DegenerateStateError("normalize: wavefunction has zero norm");
    WaveField out = *this;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& z : out.psi) z *= scale;
    return out;
}

bool WaveField::all_finite() const {
    for (const auto& z : psi)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double WaveField::max_abs() const {
    double m = 0.0;
    for (const auto& z : psi) m = std::max(m, std::abs(z));
    return m;
}

void CovarianceMatrix::validate(double tol) const {
    if (sigma.rows() != 2 * n || sigma.cols() != 2 * n)
        throw Error("CovarianceMatrix: sigma must be 2n x 2n");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw Error("CovarianceMatrix: sigma not symmetric");
    for (int blk = 0; blk < 2; ++blk) {
        Eigen::MatrixXd b = sigma.block(blk * n, blk * n, n, n);
        Eigen::LLT<Eigen::MatrixXd> llt(b);
        if (llt.info() != Eigen::Success)
            throw Error("CovarianceMatrix: diagonal block not positive definite");
    }
}

} // namespace qps
