#ifndef QPS_FIELD_HPP
#define QPS_FIELD_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qps/grid.hpp"

namespace qps {

using cdouble = std::complex<double>;

// Node/validity mask: true where a field value is undefined.
using Mask = std::vector<std::uint8_t>;

struct ScalarField {
    Grid grid;
    std::vector<double> values;
    Mask mask; // empty means "no masked points"

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    bool masked(std::size_t i) const { return !mask.empty() && mask[i]; }
    std::size_t size() const { return values.size(); }
};

struct VectorField {
    Grid grid;
    std::vector<std::vector<double>> comp; // comp[axis][point], dim entries
    Mask mask;

    VectorField() = default;
    explicit VectorField(const Grid& g)
        : grid(g), comp(g.dim, std::vector<double>(g.size(), 0.0)) {}

    bool masked(std::size_t i) const { return !mask.empty() && mask[i]; }
    std::size_t size() const { return grid.size(); }
};

struct WaveField {
    Grid grid;
    std::vector<cdouble> psi;
    PhysicsParams params;

    WaveField() = default;
    WaveField(const Grid& g, PhysicsParams p = {})
        : grid(g), psi(g.size(), cdouble{0.0, 0.0}), params(p) {
        p.validate();
    }

    std::size_t size() const { return psi.size(); }

    double norm_squared() const; // integral of |psi|^2 dV (compensated sum)
    WaveField normalized() const;
    bool all_finite() const;
    double max_abs() const;
};

struct PolarField {
    Grid grid;
    std::vector<double> R; // amplitude, >= 0
    std::vector<double> S; // action phase, stored mod 2*pi*hbar; gauge-dependent
    Mask node_mask;        // true where R < eps_node
    PhysicsParams params;
};

// Phase-space second moments, ordering (x..., p...).
struct CovarianceMatrix {
    Eigen::MatrixXd sigma;
    int n = 0; // degrees of freedom; sigma is 2n x 2n

    void validate(double tol = 1e-12) const;
};

// Default node threshold as a fraction of max |psi|.
inline constexpr double kDefaultEpsNodeRel = 1e-6;

// Amplitudes below this fraction of max R are numerically meaningless for
// ratio fields (R-derivatives divided by R); used as a hard floor inside
// operators so that underflow-region garbage never enters global transforms.
inline constexpr double kDeepFloorRel = 1e-12;

} // namespace qps

#endif
