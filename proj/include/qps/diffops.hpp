#ifndef QPS_DIFFOPS_HPP
#define QPS_DIFFOPS_HPP

#include <memory>
#include <vector>

#include "qps/field.hpp"
#include "qps/grid.hpp"

namespace qps {

// RAII wrapper around FFTW complex transforms on a grid (periodic only).
// forward() is unnormalized, backward() divides by the point count, so
// backward(forward(x)) == x up to rounding. Execution is safe to call
// from one thread per Fft instance.
class Fft {
  public:
    explicit Fft(const Grid& g);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<cdouble>& inout) const;
    void backward(std::vector<cdouble>& inout) const;

    // Angular wavenumber of mode j on an axis (Nyquist mapped to +pi*n/L).
    static double wavenumber(const Grid& g, int axis, int j);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

namespace diffops {

// First derivative along an axis. Spectral on periodic grids (Nyquist mode
// of the derivative set to zero), 4th-order finite differences with
// one-sided boundary stencils otherwise.
std::vector<cdouble> derivative(const Grid& g, const std::vector<cdouble>& f, int axis);
std::vector<double> derivative(const Grid& g, const std::vector<double>& f, int axis);

// Laplacian, same scheme dispatch.
std::vector<cdouble> laplacian(const Grid& g, const std::vector<cdouble>& f);
std::vector<double> laplacian(const Grid& g, const std::vector<double>& f);

// First derivative of a field that carries undefined (masked) points.
// Uses local 4th-order stencils only; any output point whose stencil
// touches a masked point is masked in mask_out. Masked input values never
// enter a global transform, so garbage cannot leak into valid regions.
std::vector<double> masked_derivative(const Grid& g,
                                      const std::vector<double>& f,
                                      const Mask& mask_in,
                                      int axis,
                                      Mask& mask_out);

// 4th-order finite-difference weights for the m-th derivative at point z
// given sample locations xs (Fornberg's algorithm).
std::vector<double> fd_weights(double z, const std::vector<double>& xs, int m);

} // namespace diffops

// Compensated (Kahan) summation; keeps reductions deterministic and
// accurate independent of length.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace qps

#endif
