#ifndef QPS_GRID_HPP
#define QPS_GRID_HPP

#include <array>
#include <cstddef>
#include <cmath>

#include "qps/errors.hpp"

namespace qps {

struct PhysicsParams {
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const {
        if (!(mass > 0.0)) throw Error("PhysicsParams: mass must be positive");
        if (!(hbar > 0.0)) throw Error("PhysicsParams: hbar must be positive");
    }
};

// Rectangular uniform grid in 1, 2 or 3 dimensions.
//
// Periodic grids exclude the upper endpoint (x_i = lower + i*h, h = L/n);
// bounded grids include both endpoints (h = L/(n-1)).
struct Grid {
    int dim = 1;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 3> upper{0.0, 0.0, 0.0};
    bool periodic = true;

    static Grid make(int dim,
                     std::array<int, 3> n,
                     std::array<double, 3> lower,
                     std::array<double, 3> upper,
                     bool periodic) {
        Grid g;
        g.dim = dim;
        g.n = n;
        g.lower = lower;
        g.upper = upper;
        g.periodic = periodic;
        g.validate();
        return g;
    }

    // Convenience: cube [-ext, ext]^dim with npts per axis.
    static Grid cube(int dim, int npts, double ext, bool periodic = true) {
        std::array<int, 3> n{1, 1, 1};
        std::array<double, 3> lo{}, hi{};
        for (int k = 0; k < dim; ++k) {
            n[k] = npts;
            lo[k] = -ext;
            hi[k] = ext;
        }
        return make(dim, n, lo, hi, periodic);
    }

    void validate() const {
        if (dim < 1 || dim > 3) throw Error("Grid: dim must be 1, 2 or 3");
        for (int k = 0; k < dim; ++k) {
            if (n[k] < 8 || n[k] % 2 != 0)
                throw Error("Grid: n_points must be >= 8 and even on every axis");
            if (!(upper[k] > lower[k]))
                throw Error("Grid: upper must exceed lower on every axis");
        }
    }

    double extent(int axis) const { return upper[axis] - lower[axis]; }

    double spacing(int axis) const {
        return periodic ? extent(axis) / n[axis] : extent(axis) / (n[axis] - 1);
    }

    double coord(int axis, int i) const { return lower[axis] + i * spacing(axis); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int k = 0; k < dim; ++k) s *= static_cast<std::size_t>(n[k]);
        return s;
    }

    // Volume element of one cell.
    double cell_volume() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= spacing(k);
        return v;
    }

    // Row-major linear index; axis 0 slowest.
    std::size_t index(int i, int j = 0, int k = 0) const {
        std::size_t idx = static_cast<std::size_t>(i);
        if (dim > 1) idx = idx * n[1] + j;
        if (dim > 2) idx = idx * n[2] + k;
        return idx;
    }

    std::array<int, 3> unindex(std::size_t idx) const {
        std::array<int, 3> c{0, 0, 0};
        if (dim > 2) {
            c[2] = static_cast<int>(idx % n[2]);
            idx /= n[2];
        }
        if (dim > 1) {
            c[1] = static_cast<int>(idx % n[1]);
            idx /= n[1];
        }
        c[0] = static_cast<int>(idx);
        return c;
    }

    std::array<double, 3> point(std::size_t idx) const {
        auto c = unindex(idx);
        std::array<double, 3> r{0.0, 0.0, 0.0};
        for (int k = 0; k < dim; ++k) r[k] = coord(k, c[k]);
        return r;
    }

    bool contains(const std::array<double, 3>& r) const {
        for (int k = 0; k < dim; ++k) {
            if (r[k] < lower[k] || r[k] > upper[k]) return false;
        }
        return true;
    }

    bool same_as(const Grid& o, double tol = 1e-12) const {
        if (dim != o.dim || periodic != o.periodic) return false;
        for (int k = 0; k < dim; ++k) {
            if (n[k] != o.n[k]) return false;
            if (std::abs(lower[k] - o.lower[k]) > tol) return false;
            if (std::abs(upper[k] - o.upper[k]) > tol) return false;
        }
        return true;
    }
};

} // namespace qps

#endif
