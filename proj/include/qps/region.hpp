#ifndef QPS_REGION_HPP
#define QPS_REGION_HPP

#include "qps/grid.hpp"

namespace qps {

// Verification interior used by residual maxima and identity checks.
//
// Periodic grids: the central half-width per axis. Near the edges the
// implicit periodic extension of a decaying state carries a derivative
// mismatch at the seam; the resulting spectral contamination divided by a
// small amplitude dominates ratio fields there, independent of grid size.
//
// Bounded grids: everything except `wall_cells` cells adjacent to each
// wall, where one-sided stencils and hard-wall kinks lose order.
inline bool in_verification_interior(const Grid& g, std::size_t idx, int wall_cells = 3) {
    const auto c = g.unindex(idx);
    for (int a = 0; a < g.dim; ++a) {
        if (g.periodic) {
            const double center = 0.5 * (g.lower[a] + g.upper[a]);
            const double quarter = 0.25 * g.extent(a);
            if (std::abs(g.coord(a, c[a]) - center) > quarter) return false;
        } else {
            if (c[a] < wall_cells || c[a] >= g.n[a] - wall_cells) return false;
        }
    }
    return true;
}

} // namespace qps

#endif
