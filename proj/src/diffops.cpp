#include "qps/diffops.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

namespace qps {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct Fft::Impl {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t size = 0;
    std::vector<cdouble> buf;
    Grid grid;
};

Fft::Fft(const Grid& g) : impl_(std::make_unique<Impl>()) {
    if (!g.periodic) throw Error("Fft: spectral transforms require a periodic grid");
    impl_->grid = g;
    impl_->size = g.size();
    impl_->buf.resize(impl_->size);
    int n[3] = {g.n[0], g.n[1], g.n[2]};
    auto* ptr = reinterpret_cast<fftw_complex*>(impl_->buf.data());
    std::lock_guard lock(planner_mutex());
    impl_->fwd = fftw_plan_dft(g.dim, n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(g.dim, n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw Error("Fft: plan creation failed");
}

Fft::~Fft() {
    std::lock_guard lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
}

void Fft::forward(std::vector<cdouble>& inout) const {
    if (inout.size() != impl_->size) throw Error("Fft: size mismatch");
    std::memcpy(impl_->buf.data(), inout.data(), impl_->size * sizeof(cdouble));
    fftw_execute(impl_->fwd);
    std::memcpy(inout.data(), impl_->buf.data(), impl_->size * sizeof(cdouble));
}

void Fft::backward(std::vector<cdouble>& inout) const {
    if (inout.size() != impl_->size) throw Error("Fft: size mismatch");
    std::memcpy(impl_->buf.data(), inout.data(), impl_->size * sizeof(cdouble));
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(impl_->size);
    for (std::size_t i = 0; i < impl_->size; ++i)
        inout[i] = impl_->buf[i] * scale;
}

double Fft::wavenumber(const Grid& g, int axis, int j) {
    const double L = g.extent(axis);
    const int n = g.n[axis];
    const int jj = (j <= n / 2) ? j : j - n;
    return 2.0 * std::numbers::pi * jj / L;
}

namespace diffops {

std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m) {
    // B. Fornberg, "Generation of finite difference formulas on arbitrarily
    // spaced grids", Math. Comp. 51 (1988).
    const int nd = static_cast<int>(xs.size()) - 1;
    std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i <= nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) w[i] = c[i][m];
    return w;
}

namespace {

// Per-axis stencil table for a bounded grid: 4th-order central in the
// interior, one-sided (6-point) at the two cells nearest each wall.
struct BoundedStencils {
    // weights[i] = offsets+weights applicable at line position i; only the
    // first few and last few positions differ from the interior stencil.
    std::vector<int> offs_interior;
    std::vector<double> w_interior;
    // boundary stencils indexed by position from the wall (0 or 1)
    std::vector<std::vector<int>> offs_lo, offs_hi;
    std::vector<std::vector<double>> w_lo, w_hi;

    BoundedStencils(int order, double h) {
        const int np = (order == 1) ? 5 : 6; // points in one-sided stencils
        // interior: symmetric 5-point
        offs_interior = {-2, -1, 0, 1, 2};
        std::vector<double> xs;
        for (int o : offs_interior) xs.push_back(o * h);
        w_interior = fd_weights(0.0, xs, order);
        for (int b = 0; b < 2; ++b) {
            std::vector<int> olo, ohi;
            for (int j = 0; j < np; ++j) olo.push_back(j - b);
            for (int j = 0; j < np; ++j) ohi.push_back(b - j);
            std::vector<double> xlo, xhi;
            for (int o : olo) xlo.push_back(o * h);
            for (int o : ohi) xhi.push_back(o * h);
            offs_lo.push_back(olo);
            offs_hi.push_back(ohi);
            w_lo.push_back(fd_weights(0.0, xlo, order));
            w_hi.push_back(fd_weights(0.0, xhi, order));
        }
    }
};

// Iterate lines along `axis`, calling fn(base_index, stride, count).
template <typename F>
void for_each_line(const Grid& g, int axis, F&& fn) {
    std::size_t stride = 1;
    for (int a = g.dim - 1; a > axis; --a) stride *= g.n[a];
    const int count = g.n[axis];
    // enumerate all points whose coordinate along `axis` is zero
    std::array<int, 3> n = g.n;
    n[axis] = 1;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < (g.dim > 1 ? n[1] : 1); ++j)
            for (int k = 0; k < (g.dim > 2 ? n[2] : 1); ++k) {
                std::array<int, 3> c{i, j, k};
                c[axis] = 0;
                fn(g.index(c[0], c[1], c[2]), stride, count);
            }
}

template <typename T>
std::vector<T> fd_derivative(const Grid& g, const std::vector<T>& f, int axis, int order) {
    const double h = g.spacing(axis);
    std::vector<T> out(f.size());
    if (g.periodic) {
        BoundedStencils st(order, h); // interior stencil reused with wrap
        for_each_line(g, axis, [&](std::size_t base, std::size_t stride, int count) {
            for (int i = 0; i < count; ++i) {
                T acc{};
                for (std::size_t s = 0; s < st.offs_interior.size(); ++s) {
                    int j = i + st.offs_interior[s];
                    j = ((j % count) + count) % count;
                    acc += st.w_interior[s] * f[base + j * stride];
                }
                out[base + i * stride] = acc;
            }
        });
        return out;
    }
    BoundedStencils st(order, h);
    for_each_line(g, axis, [&](std::size_t base, std::size_t stride, int count) {
        for (int i = 0; i < count; ++i) {
            const std::vector<int>* offs = &st.offs_interior;
            const std::vector<double>* w = &st.w_interior;
            if (i < 2) {
                offs = &st.offs_lo[i];
                w = &st.w_lo[i];
            } else if (i >= count - 2) {
                offs = &st.offs_hi[count - 1 - i];
                w = &st.w_hi[count - 1 - i];
            }
            T acc{};
            for (std::size_t s = 0; s < offs->size(); ++s)
                acc += (*w)[s] * f[base + (i + (*offs)[s]) * stride];
            out[base + i * stride] = acc;
        }
    });
    return out;
}

std::vector<cdouble> to_complex(const std::vector<double>& f) {
    std::vector<cdouble> c(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) c[i] = f[i];
    return c;
}

std::vector<double> to_real(const std::vector<cdouble>& c) {
    std::vector<double> f(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) f[i] = c[i].real();
    return f;
}

std::vector<cdouble> spectral_apply(const Grid& g,
                                    const std::vector<cdouble>& f,
                                    int axis,
                                    int order) {
    Fft fft(g);
    std::vector<cdouble> hat = f;
    fft.forward(hat);
    // multiply mode-wise
    std::array<int, 3> n = g.n;
    std::size_t idx = 0;
    const int n0 = n[0], n1 = (g.dim > 1 ? n[1] : 1), n2 = (g.dim > 2 ? n[2] : 1);
    for (int j0 = 0; j0 < n0; ++j0)
        for (int j1 = 0; j1 < n1; ++j1)
            for (int j2 = 0; j2 < n2; ++j2, ++idx) {
                if (order == 1) {
                    int jm[3] = {j0, j1, j2};
                    const int na = g.n[axis];
                    double k = (jm[axis] == na / 2) ? 0.0 // odd-derivative Nyquist
                                                   : Fft::wavenumber(g, axis, jm[axis]);
                    hat[idx] *= cdouble(0.0, k);
                } else { // full Laplacian
                    double k2 = 0.0;
                    int jm[3] = {j0, j1, j2};
                    for (int a = 0; a < g.dim; ++a) {
                        const double k = Fft::wavenumber(g, a, jm[a]);
                        k2 += k * k;
                    }
                    hat[idx] *= -k2;
                }
            }
    fft.backward(hat);
    return hat;
}

} // namespace

std::vector<cdouble> derivative(const Grid& g, const std::vector<cdouble>& f, int axis) {
    if (g.periodic) return spectral_apply(g, f, axis, 1);
    return fd_derivative(g, f, axis, 1);
}

std::vector<double> derivative(const Grid& g, const std::vector<double>& f, int axis) {
    if (g.periodic) return to_real(spectral_apply(g, to_complex(f), axis, 1));
    return fd_derivative(g, f, axis, 1);
}

std::vector<cdouble> laplacian(const Grid& g, const std::vector<cdouble>& f) {
    if (g.periodic) return spectral_apply(g, f, 0, 2);
    std::vector<cdouble> out(f.size(), cdouble{});
    for (int a = 0; a < g.dim; ++a) {
        auto d2 = fd_derivative(g, f, a, 2);
        for (std::size_t i = 0; i < f.size(); ++i) out[i] += d2[i];
    }
    return out;
}

std::vector<double> laplacian(const Grid& g, const std::vector<double>& f) {
    if (g.periodic) return to_real(spectral_apply(g, to_complex(f), 0, 2));
    std::vector<double> out(f.size(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        auto d2 = fd_derivative(g, f, a, 2);
        for (std::size_t i = 0; i < f.size(); ++i) out[i] += d2[i];
    }
    return out;
}

std::vector<double> masked_derivative(const Grid& g,
                                      const std::vector<double>& f,
                                      const Mask& mask_in,
                                      int axis,
                                      Mask& mask_out) {
    const double h = g.spacing(axis);
    BoundedStencils st(1, h);
    std::vector<double> out(f.size(), 0.0);
    mask_out.assign(f.size(), 0);
    auto is_masked = [&](std::size_t i) { return !mask_in.empty() && mask_in[i]; };
    for_each_line(g, axis, [&](std::size_t base, std::size_t stride, int count) {
        for (int i = 0; i < count; ++i) {
            const std::size_t self = base + i * stride;
            if (is_masked(self)) {
                mask_out[self] = 1;
                continue;
            }
            const std::vector<int>* offs = &st.offs_interior;
            const std::vector<double>* w = &st.w_interior;
            if (!g.periodic) {
                if (i < 2) {
                    offs = &st.offs_lo[i];
                    w = &st.w_lo[i];
                } else if (i >= count - 2) {
                    offs = &st.offs_hi[count - 1 - i];
                    w = &st.w_hi[count - 1 - i];
                }
            }
            double acc = 0.0;
            bool ok = true;
            for (std::size_t s = 0; s < offs->size(); ++s) {
                int j = i + (*offs)[s];
                if (g.periodic) j = ((j % count) + count) % count;
                const std::size_t p = base + j * stride;
                if (is_masked(p)) {
                    ok = false;
                    break;
                }
                acc += (*w)[s] * f[p];
            }
            if (ok) {
                out[self] = acc;
            } else {
                mask_out[self] = 1;
            }
        }
    });
    return out;
}

} // namespace diffops
} // namespace qps
