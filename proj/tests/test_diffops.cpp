#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qps/diffops.hpp"

using namespace qps;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fft round trip") {
    const Grid g = Grid::cube(1, 32, kPi);
    Fft fft(g);
    std::vector<cdouble> x(g.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = cdouble(std::sin(0.37 * i), std::cos(0.11 * i));
    auto y = x;
    fft.forward(y);
    fft.backward(y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - x[i]) < 1e-13);
}

TEST_CASE("spectral derivative of a trig polynomial is exact") {
    const Grid g = Grid::cube(1, 32, kPi); // domain (-pi, pi), periodic
    std::vector<double> f(g.size()), df_exact(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, static_cast<int>(i));
        f[i] = std::sin(3.0 * x) + 0.5 * std::cos(5.0 * x);
        df_exact[i] = 3.0 * std::cos(3.0 * x) - 2.5 * std::sin(5.0 * x);
    }
    const auto df = diffops::derivative(g, f, 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(df[i] == doctest::Approx(df_exact[i]).epsilon(1e-11));
}

TEST_CASE("spectral laplacian in 2D") {
    const Grid g = Grid::cube(2, 24, kPi);
    std::vector<double> f(g.size()), lap_exact(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto r = g.point(i);
        f[i] = std::sin(2.0 * r[0]) * std::cos(r[1]);
        lap_exact[i] = -5.0 * f[i];
    }
    const auto lap = diffops::laplacian(g, f);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(lap[i] == doctest::Approx(lap_exact[i]).epsilon(1e-10));
}

TEST_CASE("bounded FD4 derivative is exact for quartics") {
    const Grid g = Grid::make(1, {16, 1, 1}, {0.0, 0, 0}, {1.0, 0, 0}, false);
    std::vector<double> f(g.size()), df_exact(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, static_cast<int>(i));
        f[i] = 1.0 + x + x * x * x * x;
        df_exact[i] = 1.0 + 4.0 * x * x * x;
    }
    const auto df = diffops::derivative(g, f, 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(df[i] == doctest::Approx(df_exact[i]).epsilon(1e-11));
}

TEST_CASE("bounded FD4 laplacian converges at 4th order") {
    auto err_for = [](int n) {
        const Grid g = Grid::make(1, {n, 1, 1}, {0.0, 0, 0}, {1.0, 0, 0}, false);
        std::vector<double> f(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            f[i] = std::sin(2.0 * g.coord(0, static_cast<int>(i)));
        const auto lap = diffops::laplacian(g, f);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            e = std::max(e, std::abs(lap[i] + 4.0 * f[i]));
        return e;
    };
    const double e32 = err_for(32), e64 = err_for(64);
    CHECK(e32 / e64 > 12.0); // ~16 for a clean 4th-order scheme
}

TEST_CASE("fornberg weights reproduce the classic centered stencil") {
    // 2nd derivative, 5-point centered: (-1 16 -30 16 -1)/12
    const auto w = diffops::fd_weights(0.0, {-2, -1, 0, 1, 2}, 2);
    CHECK(w[0] == doctest::Approx(-1.0 / 12.0));
    CHECK(w[1] == doctest::Approx(16.0 / 12.0));
    CHECK(w[2] == doctest::Approx(-30.0 / 12.0));
    CHECK(w[3] == doctest::Approx(16.0 / 12.0));
    CHECK(w[4] == doctest::Approx(-1.0 / 12.0));
}

TEST_CASE("masked derivative avoids masked points and marks the halo") {
    const Grid g = Grid::cube(1, 128, kPi);
    std::vector<double> f(g.size());
    Mask mask(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i)
        f[i] = std::sin(g.coord(0, static_cast<int>(i)));
    mask[40] = 1;
    f[40] = 1e9; // garbage that must never be read
    Mask out_mask;
    const auto df = diffops::masked_derivative(g, f, mask, 0, out_mask);
    CHECK(out_mask[40] == 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (out_mask[i]) continue;
        const double exact = std::cos(g.coord(0, static_cast<int>(i)));
        CHECK(df[i] == doctest::Approx(exact).epsilon(1e-5));
    }
}

TEST_CASE("kahan summation") {
    KahanSum s;
    s.add(1.0);
    for (int i = 0; i < 10000000; ++i) s.add(1e-16);
    CHECK(s.value() == doctest::Approx(1.0 + 1e-9).epsilon(1e-12));
}
