#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qps/states.hpp"

using namespace qps;

TEST_CASE("spec validation") {
    StateSpec s;
    s.kind = StateKind::Well1d;
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), Error); // well needs n >= 1
    s.n = 1;
    s.L = -1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.L = 1.0;
    CHECK_NOTHROW(s.validate());

    StateSpec osc;
    osc.kind = StateKind::Oscillator1d;
    osc.n = -1;
    CHECK_THROWS_AS(osc.validate(), Error);
    osc.n = 0;
    osc.omega = 0.0;
    CHECK_THROWS_AS(osc.validate(), Error);

    StateSpec packet;
    packet.kind = StateKind::GaussianPacket;
    packet.sigma = 0.0;
    CHECK_THROWS_AS(packet.validate(), Error);
}

TEST_CASE("realized states are normalized") {
    for (StateKind kind : {StateKind::Coherent3d, StateKind::Oscillator1d,
                           StateKind::Well1d, StateKind::GaussianPacket,
                           StateKind::PlaneModulated}) {
        StateSpec s;
        s.kind = kind;
        s.n = (kind == StateKind::Well1d) ? 2 : 1;
        s.p0 = 1.0;
        const WaveField wf = realize(s, default_grid(s));
        CHECK(wf.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("truncation beyond the tail budget is rejected") {
    StateSpec s;
    s.kind = StateKind::GaussianPacket;
    s.sigma = 1.0;
    // 2-sigma half-width chops off ~5% of the mass
    CHECK_THROWS_AS(realize(s, Grid::cube(1, 64, 2.0)), Error);
    CHECK_NOTHROW(realize(s, Grid::cube(1, 64, 8.0)));
}

TEST_CASE("well states require the exact (0, L) bounded grid") {
    StateSpec s;
    s.kind = StateKind::Well1d;
    s.n = 1;
    s.L = 1.0;
    CHECK_THROWS_AS(realize(s, Grid::cube(1, 64, 1.0)), Error); // periodic
    CHECK_THROWS_AS(
        realize(s, Grid::make(1, {64, 1, 1}, {0, 0, 0}, {2.0, 0, 0}, false)),
        Error); // wrong width
    const Grid good = Grid::make(1, {64, 1, 1}, {0, 0, 0}, {1.0, 0, 0}, false);
    const WaveField wf = realize(s, good);
    CHECK(std::abs(wf.psi.front()) == 0.0);
    CHECK(std::abs(wf.psi.back()) == 0.0);
}

TEST_CASE("exact energies") {
    StateSpec c;
    c.kind = StateKind::Coherent3d;
    CHECK(exact_energy(c) == doctest::Approx(1.5)); // 3 hbar omega / 2

    StateSpec o;
    o.kind = StateKind::Oscillator1d;
    o.n = 2;
    CHECK(exact_energy(o) == doctest::Approx(2.5));

    StateSpec w;
    w.kind = StateKind::Well1d;
    w.n = 3;
    w.L = 2.0;
    const double kn = 3.0 * std::numbers::pi / 2.0;
    CHECK(exact_energy(w) == doctest::Approx(0.5 * kn * kn));

    StateSpec p;
    p.kind = StateKind::GaussianPacket;
    CHECK_THROWS_AS(exact_energy(p), NotAnEigenstateError);
}

TEST_CASE("eigenstate flags") {
    StateSpec s;
    s.kind = StateKind::Coherent3d;
    CHECK(s.is_eigenstate());
    s.kind = StateKind::PlaneModulated;
    CHECK_FALSE(s.is_eigenstate());
}

TEST_CASE("oscillator eigenstates satisfy the eigenvalue equation") {
    StateSpec s;
    s.kind = StateKind::Oscillator1d;
    s.n = 2;
    const Grid g = default_grid(s, 256);
    const WaveField wf = realize(s, g);
    const ScalarField v = exact_potential(s)(g);
    // H psi = E psi checked in the interior via the spectral Laplacian
    // through the quantum potential identity is covered elsewhere; here
    // just pin the potential itself.
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, static_cast<int>(i));
        CHECK(v.values[i] == doctest::Approx(0.5 * x * x).epsilon(1e-12));
    }
    CHECK(wf.all_finite());
}

TEST_CASE("default grids give 8-sigma extents") {
    StateSpec s;
    s.kind = StateKind::GaussianPacket;
    s.sigma = 2.0;
    const Grid g = default_grid(s, 64);
    CHECK(g.extent(0) >= 2.0 * 8.0 * 2.0 * 0.99); // half-width >= 8 sigma
}
