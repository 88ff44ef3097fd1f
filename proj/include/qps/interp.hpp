#ifndef QPS_INTERP_HPP
#define QPS_INTERP_HPP

#include <array>
#include <vector>

#include "qps/field.hpp"

namespace qps {

// Tensor-product cubic (4-point Lagrange) interpolation of a scalar field.
// Periodic grids wrap; bounded grids shift the stencil at the walls.
// Evaluation at a point whose stencil touches a masked node throws
// PreconditionError; points outside the grid throw OutOfDomainError.
class CubicInterpolator {
  public:
    CubicInterpolator(const Grid& g, const std::vector<double>& values, const Mask& mask);

    double operator()(const std::array<double, 3>& r) const;

    // True if the stencil at r is fully off-mask (and r is inside).
    bool evaluable(const std::array<double, 3>& r) const;

  private:
    const Grid grid_;
    const std::vector<double> values_;
    const Mask mask_;

    bool gather(const std::array<double, 3>& r,
                std::array<std::array<int, 4>, 3>& idx,
                std::array<std::array<double, 4>, 3>& w) const;
};

} // namespace qps

#endif
