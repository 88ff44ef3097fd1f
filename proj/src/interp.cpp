#include "qps/interp.hpp"

#include <cmath>

namespace qps {

CubicInterpolator::CubicInterpolator(const Grid& g,
                                     const std::vector<double>& values,
                                     const Mask& mask)
    : grid_(g), values_(values), mask_(mask) {
    if (values_.size() != g.size()) throw Error("CubicInterpolator: size mismatch");
}

bool CubicInterpolator::gather(const std::array<double, 3>& r,
                               std::array<std::array<int, 4>, 3>& idx,
                               std::array<std::array<double, 4>, 3>& w) const {
    for (int a = 0; a < grid_.dim; ++a) {
        const double h = grid_.spacing(a);
        const int n = grid_.n[a];
        double t = (r[a] - grid_.lower[a]) / h;
        if (grid_.periodic) {
            // wrap into [0, n)
            t -= std::floor(t / n) * n;
        } else {
            if (r[a] < grid_.lower[a] - 1e-12 || r[a] > grid_.upper[a] + 1e-12)
                return false;
            t = std::clamp(t, 0.0, static_cast<double>(n - 1));
        }
        int i0 = static_cast<int>(std::floor(t)) - 1; // leftmost of 4 nodes
        if (!grid_.periodic) i0 = std::clamp(i0, 0, n - 4);
        std::array<double, 4> xs{};
        for (int s = 0; s < 4; ++s) {
            int j = i0 + s;
            xs[s] = static_cast<double>(j);
            if (grid_.periodic) j = ((j % n) + n) % n;
            idx[a][s] = j;
        }
        // Lagrange weights at t over nodes xs
        for (int s = 0; s < 4; ++s) {
            double num = 1.0, den = 1.0;
            for (int q = 0; q < 4; ++q) {
                if (q == s) continue;
                num *= t - xs[q];
                den *= xs[s] - xs[q];
            }
            w[a][s] = num / den;
        }
    }
    return true;
}

bool CubicInterpolator::evaluable(const std::array<double, 3>& r) const {
    std::array<std::array<int, 4>, 3> idx{};
    std::array<std::array<double, 4>, 3> w{};
    if (!gather(r, idx, w)) return false;
    if (mask_.empty()) return true;
    const int d = grid_.dim;
    for (int s0 = 0; s0 < 4; ++s0)
        for (int s1 = 0; s1 < (d > 1 ? 4 : 1); ++s1)
            for (int s2 = 0; s2 < (d > 2 ? 4 : 1); ++s2) {
                const std::size_t p = grid_.index(idx[0][s0], d > 1 ? idx[1][s1] : 0,
                                                  d > 2 ? idx[2][s2] : 0);
                if (mask_[p]) return false;
            }
    return true;
}

double CubicInterpolator::operator()(const std::array<double, 3>& r) const {
    std::array<std::array<int, 4>, 3> idx{};
    std::array<std::array<double, 4>, 3> w{};
    if (!gather(r, idx, w))
        throw OutOfDomainError("CubicInterpolator: point outside grid");
    const int d = grid_.dim;
    double acc = 0.0;
    for (int s0 = 0; s0 < 4; ++s0)
        for (int s1 = 0; s1 < (d > 1 ? 4 : 1); ++s1)
            for (int s2 = 0; s2 < (d > 2 ? 4 : 1); ++s2) {
                const std::size_t p = grid_.index(idx[0][s0], d > 1 ? idx[1][s1] : 0,
                                                  d > 2 ? idx[2][s2] : 0);
                if (!mask_.empty() && mask_[p])
                    throw PreconditionError("CubicInterpolator: stencil touches masked node");
                double wt = w[0][s0];
                if (d > 1) wt *= w[1][s1];
                if (d > 2) wt *= w[2][s2];
                acc += wt * values_[p];
            }
    return acc;
}

} // namespace qps
