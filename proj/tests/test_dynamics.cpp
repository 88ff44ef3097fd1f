#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qps/dynamics.hpp"
#include "qps/region.hpp"
#include "qps/states.hpp"
#include "qps/wavefield.hpp"

using namespace qps;

namespace {

constexpr double kPi = std::numbers::pi;

StateSpec osc1d(int n = 0) {
    StateSpec s;
    s.kind = StateKind::Oscillator1d;
    s.n = n;
    return s;
}

double max_diff(const WaveField& a, const WaveField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a.psi[i] - b.psi[i]));
    return d;
}

} // namespace

TEST_CASE("propagation conserves the norm") {
    const StateSpec s = osc1d(1);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 500;
    cfg.record_every = 500;
    cfg.potential = exact_potential(s);
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    CHECK(std::abs(ts.frames.back().norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("eigenstates acquire only the phase exp(-iEt/hbar)") {
    const StateSpec s = osc1d(1);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 5e-4;
    cfg.n_steps = 1000; // t = 0.5
    cfg.record_every = 1000;
    cfg.potential = exact_potential(s);
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    const double e = exact_energy(s);
    const double t = ts.times.back();
    WaveField expect = wf;
    const cdouble phase(std::cos(e * t), -std::sin(e * t));
    for (auto& z : expect.psi) z *= phase;
    CHECK(max_diff(ts.frames.back(), expect) < 1e-6);
}

TEST_CASE("Dirichlet propagation keeps well eigenstates stationary") {
    StateSpec s;
    s.kind = StateKind::Well1d;
    s.n = 2;
    s.L = 1.0;
    const Grid g = default_grid(s);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-4;
    cfg.n_steps = 1000; // t = 0.1
    cfg.record_every = 1000;
    const Timeseries ts = propagate_schrodinger(wf, cfg); // V = 0 inside
    const double e = exact_energy(s);
    WaveField expect = wf;
    const cdouble phase(std::cos(e * 0.1), -std::sin(e * 0.1));
    for (auto& z : expect.psi) z *= phase;
    CHECK(max_diff(ts.frames.back(), expect) < 1e-8);
    CHECK(std::abs(ts.frames.back().psi.front()) == 0.0); // hard walls
}

TEST_CASE("time reversal: conjugate evolution undoes the forward run") {
    const StateSpec s = osc1d(0);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 200;
    cfg.record_every = 200;
    cfg.potential = exact_potential(s);
    Timeseries fwd = propagate_schrodinger(wf, cfg);
    WaveField back = fwd.frames.back();
    for (auto& z : back.psi) z = std::conj(z);
    const Timeseries rev = propagate_schrodinger(back, cfg);
    WaveField final = rev.frames.back();
    for (auto& z : final.psi) z = std::conj(z);
    CHECK(max_diff(final, wf) < 1e-12);
}

TEST_CASE("free Gaussian packet spreads at the analytic rate") {
    StateSpec s;
    s.kind = StateKind::GaussianPacket;
    s.sigma = 1.0;
    const Grid g = Grid::cube(1, 256, 16.0);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000; // t = 1
    cfg.record_every = 1000;
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    const CovarianceMatrix cm = covariance_matrix(ts.frames.back());
    CHECK(cm.sigma(0, 0) == doctest::Approx(1.25).epsilon(1e-8)); // 1 + (t/2)^2
}

TEST_CASE("madelung residuals vanish for the exact stationary evolution") {
    const StateSpec s = osc1d(0);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    const double e = exact_energy(s);
    Timeseries ts;
    for (int f = 0; f < 5; ++f) {
        const double t = 0.01 * f;
        WaveField frame = wf;
        const cdouble phase(std::cos(e * t), -std::sin(e * t));
        for (auto& z : frame.psi) z *= phase;
        ts.times.push_back(t);
        ts.frames.push_back(std::move(frame));
    }
    const auto res = madelung_residuals(ts, exact_potential(s)(g), true);
    CHECK(res.max_hj() < 1e-4);       // limited by the centered time sampling
    CHECK(res.max_continuity() < 1e-10);
    // the removed gauge constant is -E (dS/dt = -E, the rest vanishes)
    for (double off : res.hj_offset) CHECK(off == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("continuity residual converges with frame spacing") {
    // moving packet: rho depends on time, so the centered sampling error
    // O(delta^2) dominates and must shrink 4x when delta halves
    StateSpec s;
    s.kind = StateKind::PlaneModulated;
    s.p0 = 1.0;
    const Grid g = Grid::cube(1, 256, 12.0);
    const WaveField wf = realize(s, g);
    auto run = [&](int record_every, int steps) {
        PropagationConfig cfg;
        cfg.dt = 1e-4;
        cfg.n_steps = steps;
        cfg.record_every = record_every;
        const Timeseries ts = propagate_schrodinger(wf, cfg);
        ScalarField v(g);
        return madelung_residuals(ts, v, true).max_continuity();
    };
    const double c_coarse = run(40, 240);
    const double c_fine = run(20, 240);
    CHECK(c_coarse / c_fine > 3.5);
}

TEST_CASE("classical propagation refuses states with interior nodes") {
    const StateSpec s = osc1d(1); // node at the origin
    const Grid g = default_grid(s, 256);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-4;
    cfg.n_steps = 10;
    cfg.potential = exact_potential(s);
    CHECK_THROWS_AS(propagate_classical_nonlinear(wf, cfg), NodeFormationError);
}

TEST_CASE("classical and linear propagation agree when Q vanishes") {
    const Grid g = Grid::cube(1, 64, kPi);
    WaveField plane(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coord(0, static_cast<int>(i));
        plane.psi[i] = cdouble(std::cos(2.0 * x), std::sin(2.0 * x));
    }
    plane = plane.normalized();
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1;
    const WaveField lin = propagate_schrodinger(plane, cfg).frames.back();
    const WaveField cls = propagate_classical_nonlinear(plane, cfg).frames.back();
    CHECK(max_diff(lin, cls) < 1e-10);
}

TEST_CASE("bohm trajectories are frozen in a stationary real state") {
    const StateSpec s = osc1d(0);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    const double e = exact_energy(s);
    Timeseries ts;
    for (int f = 0; f < 6; ++f) {
        const double t = 0.2 * f;
        WaveField frame = wf;
        const cdouble phase(std::cos(e * t), -std::sin(e * t));
        for (auto& z : frame.psi) z *= phase;
        ts.times.push_back(t);
        ts.frames.push_back(std::move(frame));
    }
    const std::vector<std::array<double, 3>> seeds = {
        {0.0, 0, 0}, {0.5, 0, 0}, {-1.3, 0, 0}, {2.0, 0, 0}};
    const auto ens = integrate_bohm_trajectories(ts, seeds, 8);
    for (std::size_t p = 0; p < ens.paths.size(); ++p) {
        REQUIRE(ens.paths[p].status == Trajectory::Status::Ok);
        CHECK(std::abs(ens.paths[p].pos.back()[0] - seeds[p][0]) < 1e-10);
    }
}

TEST_CASE("trajectories ride along with a boosted packet") {
    StateSpec s;
    s.kind = StateKind::PlaneModulated;
    s.p0 = 1.0;
    const Grid g = Grid::cube(1, 256, 12.0);
    const WaveField wf = realize(s, g);
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 500; // t = 0.5
    cfg.record_every = 50;
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    const auto ens = integrate_bohm_trajectories(ts, {{0.0, 0, 0}}, 10);
    REQUIRE(ens.paths[0].status == Trajectory::Status::Ok);
    // the center of a free boosted Gaussian moves at p0/m with the Bohm
    // velocity equal to p0/m at the center for all t
    CHECK(ens.paths[0].pos.back()[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("seeds on masked points are snapped and flagged") {
    const StateSpec s = osc1d(0);
    const Grid g = default_grid(s, 128);
    const WaveField wf = realize(s, g);
    Timeseries ts;
    for (int f = 0; f < 2; ++f) {
        ts.times.push_back(0.1 * f);
        ts.frames.push_back(wf);
    }
    // deep in the Gaussian tail, where the amplitude is masked
    const double edge = g.upper[0] - 2.0 * g.spacing(0);
    const auto ens = integrate_bohm_trajectories(ts, {{edge, 0, 0}}, 2);
    CHECK(ens.paths[0].seed_snapped);
    CHECK(ens.paths[0].status == Trajectory::Status::Ok);
}

TEST_CASE("node diagnostics localize the well n=2 node at L/2") {
    StateSpec s;
    s.kind = StateKind::Well1d;
    s.n = 2;
    s.L = 1.0;
    const Grid g = default_grid(s);
    const WaveField wf = realize(s, g);
    const NodeReport nr = node_diagnostics(wf);
    REQUIRE(nr.nodes.size() == 1);
    CHECK(std::abs(nr.nodes[0].x - 0.5) <= g.spacing(0) + 1e-12);
    // Q is the constant E_2 on the shells away from the node
    CHECK(nr.nodes[0].q_constant);
    CHECK(nr.nodes[0].q_shell_mean ==
          doctest::Approx(exact_energy(s)).epsilon(1e-4));
}

TEST_CASE("nodeless states produce an empty node report") {
    const StateSpec s = osc1d(0);
    const WaveField wf = realize(s, default_grid(s, 128));
    CHECK(node_diagnostics(wf).nodes.empty());
}

TEST_CASE("stability number scales with dt") {
    const StateSpec s = osc1d(0);
    const WaveField wf = realize(s, default_grid(s, 128));
    PropagationConfig a, b;
    a.dt = 1e-3;
    b.dt = 2e-3;
    a.potential = b.potential = exact_potential(s);
    CHECK(stability_number(wf, b) == doctest::Approx(2.0 * stability_number(wf, a)));
}
