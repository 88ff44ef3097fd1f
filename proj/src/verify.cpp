#include "qps/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "qps/dynamics.hpp"
#include "qps/fermi.hpp"
#include "qps/region.hpp"
#include "qps/states.hpp"
#include "qps/symplectic.hpp"
#include "qps/wavefield.hpp"

namespace qps {

namespace {

using clock_type = std::chrono::steady_clock;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

StateSpec coherent_spec() {
    StateSpec s;
    s.kind = StateKind::Coherent3d;
    s.omega = 1.0;
    return s;
}

// Oscillator period with omega = 1
constexpr double kPeriod = 2.0 * std::numbers::pi;

CriterionResult c1_oscillator_qpot() {
    CriterionResult r{1, "oscillator quantum potential", 0, 1e-6, false, 0, ""};
    const StateSpec spec = coherent_spec();
    const Grid g = Grid::cube(3, 64, 6.0);
    const WaveField wf = realize(spec, g);
    const ScalarField q = quantum_potential(wf);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (q.masked(i) || !in_verification_interior(g, i)) continue;
        const auto p = g.point(i);
        const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        err = std::max(err, std::abs(q.values[i] - (1.5 - 0.5 * r2)));
    }
    r.value = err;
    r.pass = err < r.tolerance;
    r.detail = fmt("max interior |Q - (3/2 - r^2/2)| = %.3e on 64^3 (-6,6)^3", err);
    return r;
}

CriterionResult c2_force_balance() {
    CriterionResult r{2, "force balance F_Q + F_C = 0", 0, 1e-5, false, 0, ""};
    const StateSpec spec = coherent_spec();
    const Grid g = Grid::cube(3, 64, 6.0);
    const WaveField wf = realize(spec, g);
    const ScalarField v = exact_potential(spec)(g);
    const VectorField fb = force_balance_field(wf, v);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (fb.masked(i) || !in_verification_interior(g, i)) continue;
        for (int a = 0; a < g.dim; ++a)
            err = std::max(err, std::abs(fb.comp[a][i]));
    }
    r.value = err;
    r.pass = err < r.tolerance;
    r.detail = fmt("max interior |F_Q + F_C| = %.3e (coherent state)", err);
    return r;
}

CriterionResult c3_energy_identity() {
    CriterionResult r{3, "energy identity V + Q = E", 0, 1e-5, false, 0, ""};
    double worst = 0.0;
    std::string detail;
    {
        const StateSpec spec = coherent_spec();
        const Grid g = default_grid(spec);
        const WaveField wf = realize(spec, g);
        const double dev =
            stationary_identity_check(wf, exact_potential(spec)(g), exact_energy(spec));
        worst = std::max(worst, dev);
        detail += fmt("coherent %.3e", dev);
    }
    for (int n = 1; n <= 3; ++n) {
        StateSpec spec;
        spec.kind = StateKind::Well1d;
        spec.n = n;
        spec.L = 1.0;
        const Grid g = default_grid(spec);
        const WaveField wf = realize(spec, g);
        const double dev =
            stationary_identity_check(wf, exact_potential(spec)(g), exact_energy(spec));
        worst = std::max(worst, dev);
        detail += fmt(", well n=%.0f %.3e", static_cast<double>(n), dev);
    }
    r.value = worst;
    r.pass = worst < r.tolerance;
    r.detail = "max interior |V + Q - E|: " + detail;
    return r;
}

CriterionResult c4_fermi_capacity() {
    CriterionResult r{4, "Fermi set capacity 3h/2", 0, 1e-12, false, 0, ""};
    const StateSpec spec = coherent_spec();
    const QuadraticForm q = fermi_set_quadratic(spec);
    const double target = 3.0 * std::numbers::pi * spec.params.hbar; // 3h/2

    const auto t0 = clock_type::now();
    const double c = capacity_quadratic(q);
    const double ms =
        std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();

    double err = std::abs(c - target) / target;
    for (int k = 0; k < q.n; ++k)
        err = std::max(err, std::abs(conjugate_section_area(q, k) - target) / target);
    r.value = err;
    r.pass = err < r.tolerance && ms < 1.0;
    r.detail = fmt("c = %.15g, rel err (capacity + 3 sections) = %.3e, %.3f ms",
                   c, err, ms);
    return r;
}

CriterionResult c5_blob_ratios() {
    CriterionResult r{5, "quantum blob ratios 3 and 1", 0, 1e-12, false, 0, ""};
    const double hbar = 1.0;
    const BlobCheckResult b3 = quantum_blob_contained(fermi_set_quadratic(coherent_spec()), hbar);
    StateSpec s1;
    s1.kind = StateKind::Oscillator1d;
    s1.n = 0;
    const BlobCheckResult b1 = quantum_blob_contained(fermi_set_quadratic(s1), hbar);
    const double err = std::max(std::abs(b3.ratio - 3.0), std::abs(b1.ratio - 1.0));
    r.value = err;
    r.pass = b3.pass && b1.pass && err < r.tolerance;
    r.detail = fmt("3D ground ratio %.15g, 1D ground ratio %.15g", b3.ratio, b1.ratio);
    return r;
}

CriterionResult c6_fermi_residual() {
    CriterionResult r{6, "Fermi operator residual + convergence", 0, 1e-7, false, 0, ""};
    std::vector<StateSpec> specs;
    specs.push_back(coherent_spec());
    {
        StateSpec s;
        s.kind = StateKind::GaussianPacket;
        s.sigma = 1.0;
        specs.push_back(s);
        s.kind = StateKind::PlaneModulated;
        s.p0 = 1.5;
        specs.push_back(s);
    }
    double worst = 0.0;
    bool all_converged = true;
    std::string detail;
    for (const auto& spec : specs) {
        const double res64 = fermi_operator_residual(realize(spec, default_grid(spec, 64)));
        const double res32 = fermi_operator_residual(realize(spec, default_grid(spec, 32)));
        const double ratio = res32 / std::max(res64, 1e-300);
        // once both residuals sit at the rounding floor there is nothing
        // left to converge; the 4x requirement applies above it
        const bool converged = ratio >= 4.0 || (res32 < 1e-12 && res64 < 1e-12);
        worst = std::max(worst, res64);
        all_converged = all_converged && converged;
        detail += spec.kind_name() + fmt(": %.3e (32->64 ratio %.2g", res64, ratio);
        detail += (converged && ratio < 4.0) ? ", at floor); " : "); ";
    }
    r.value = worst;
    r.pass = worst < r.tolerance && all_converged;
    r.detail = detail + (all_converged ? "convergence ok" : "convergence FAILED");
    return r;
}

struct MadelungRun {
    double hj = 0.0;
    double cont = 0.0;
};

MadelungRun madelung_run(double dt, int record_every) {
    const StateSpec spec = coherent_spec();
    const Grid g = Grid::cube(3, 32, 7.0);
    const WaveField wf = realize(spec, g);
    PropagationConfig cfg;
    cfg.dt = dt;
    // round up to a multiple of record_every so frame spacing is uniform
    const int raw = static_cast<int>(std::llround(kPeriod / dt));
    cfg.n_steps = ((raw + record_every - 1) / record_every) * record_every;
    cfg.record_every = record_every;
    cfg.potential = exact_potential(spec);
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    const MadelungResiduals res = madelung_residuals(ts, cfg.potential(g), true);
    return {res.max_hj(), res.max_continuity()};
}

CriterionResult c7_madelung_equivalence() {
    CriterionResult r{7, "Schrodinger <-> Madelung residuals", 0, 1e-4, false, 0, ""};
    // The time-sampled residual carries an O(delta^2) frame-spacing error on
    // top of the O(dt^2) splitting error being measured. Scaling the frame
    // spacing as record_every ~ dt^2 makes the sampling contribution decay
    // strictly faster than the signal, so the dt-halving ratio is not pulled
    // below 4 by a sampling or rounding floor.
    const MadelungRun a = madelung_run(1e-3, 200);
    const MadelungRun b = madelung_run(5e-4, 50);
    const double hj_ratio = a.hj / std::max(b.hj, 1e-300);
    const double cont_ratio = a.cont / std::max(b.cont, 1e-300);
    // Safety net: residuals below the spectral rounding floor cannot show a
    // convergence ratio.
    const bool cont_ok = (a.cont < 1e-8 && b.cont < 1e-8) || cont_ratio >= 4.0;
    r.value = a.hj;
    r.pass = a.hj < 1e-4 && a.cont < 1e-6 && hj_ratio >= 4.0 && cont_ok;
    r.detail = fmt("HJ %.3e (ratio %.2f on dt halving), ", a.hj, hj_ratio) +
               fmt("continuity %.3e (ratio %.1f)", a.cont, cont_ratio);
    return r;
}

CriterionResult c8_stationarity() {
    CriterionResult r{8, "stationarity of the oscillator ground state", 0, 1e-8,
                      false, 0, ""};
    const StateSpec spec = coherent_spec();
    const Grid g = Grid::cube(3, 32, 6.0);
    const WaveField wf = realize(spec, g);

    // density drift over one numerically propagated period
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = static_cast<int>(std::llround(kPeriod / cfg.dt));
    cfg.record_every = cfg.n_steps;
    cfg.potential = exact_potential(spec);
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    double drift = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        drift = std::max(drift,
                         std::abs(std::norm(ts.frames.back().psi[i]) -
                                  std::norm(ts.frames.front().psi[i])));

    // Bohm trajectories in the stationary state: frames of the exact
    // time dependence psi0 * exp(-iEt/hbar)
    const double e = exact_energy(spec);
    Timeseries stat;
    const int n_frames = 11;
    for (int f = 0; f < n_frames; ++f) {
        const double t = kPeriod * f / (n_frames - 1);
        WaveField frame = wf;
        const cdouble phase(std::cos(e * t), -std::sin(e * t));
        for (auto& z : frame.psi) z *= phase;
        stat.times.push_back(t);
        stat.frames.push_back(std::move(frame));
    }
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<std::array<double, 3>> seeds(100);
    for (auto& s : seeds) s = {u(rng), u(rng), u(rng)};
    const TrajectoryEnsemble ens = integrate_bohm_trajectories(stat, seeds, 10);
    double moved = 0.0;
    for (std::size_t p = 0; p < ens.paths.size(); ++p) {
        const auto& tr = ens.paths[p];
        if (tr.status != Trajectory::Status::Ok)
            return {8, r.name, 1.0, r.tolerance, false, 0, "trajectory aborted"};
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double d = tr.pos.back()[a] - seeds[p][a];
            d2 += d * d;
        }
        moved = std::max(moved, std::sqrt(d2));
    }
    r.value = moved;
    r.pass = moved < 1e-8 && drift < 1e-7;
    r.detail = fmt("max displacement %.3e (100 seeds, tol 1e-8), "
                   "density drift %.3e (tol 1e-7)", moved, drift);
    return r;
}

CriterionResult c9_free_packet() {
    CriterionResult r{9, "free-packet spreading control", 0, 1e-6, false, 0, ""};
    StateSpec spec;
    spec.kind = StateKind::GaussianPacket;
    spec.sigma = 1.0;
    const Grid g = Grid::cube(1, 256, 16.0);
    const WaveField wf = realize(spec, g);
    PropagationConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 2000; // t = 2
    cfg.record_every = cfg.n_steps;
    const Timeseries ts = propagate_schrodinger(wf, cfg);
    const CovarianceMatrix cov = covariance_matrix(ts.frames.back());
    const double t = 2.0;
    const double exact = 1.0 + (t / 2.0) * (t / 2.0); // sigma^2 (1 + (hbar t / 2 m sigma^2)^2)
    const double err = std::abs(cov.sigma(0, 0) - exact) / exact;
    r.value = err;
    r.pass = err < r.tolerance;
    r.detail = fmt("Delta x^2(2) = %.12g vs 2, rel err %.3e", cov.sigma(0, 0), err);
    return r;
}

CriterionResult c10_classical_equation() {
    CriterionResult r{10, "nonlinear classical equation", 0, 1e-4, false, 0, ""};
    const StateSpec spec = coherent_spec();
    const Grid g = Grid::cube(3, 32, 6.0);
    const WaveField wf = realize(spec, g);
    PropagationConfig cfg;
    cfg.dt = 2e-4;
    cfg.n_steps = 500; // t = 0.1
    // record every step: the time-sampled residual carries an O(delta^2)
    // error in the frame spacing delta that would otherwise dominate
    cfg.record_every = 1;
    cfg.potential = exact_potential(spec);
    cfg.half_step_q_refresh = true;
    const Timeseries ts = propagate_classical_nonlinear(wf, cfg);
    const ScalarField v = cfg.potential(g);
    const double hj_free = madelung_residuals(ts, v, false).max_hj();
    const double hj_q = madelung_residuals(ts, v, true).max_hj();

    // single-step agreement on a state with Q identically zero: a plane
    // wave of uniform amplitude, V = 0
    const Grid g1 = Grid::cube(1, 64, std::numbers::pi);
    WaveField plane(g1);
    for (std::size_t i = 0; i < g1.size(); ++i) {
        const double x = g1.coord(0, static_cast<int>(i));
        plane.psi[i] = cdouble(std::cos(x), std::sin(x));
    }
    plane = plane.normalized();
    PropagationConfig one;
    one.dt = 1e-3;
    one.n_steps = 1;
    const WaveField lin = propagate_schrodinger(plane, one).frames.back();
    const WaveField cls = propagate_classical_nonlinear(plane, one).frames.back();
    double step_diff = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i)
        step_diff = std::max(step_diff, std::abs(lin.psi[i] - cls.psi[i]));

    r.value = hj_free;
    r.pass = hj_free < 1e-4 && hj_q > 1e-2 && step_diff < 1e-10;
    r.detail = fmt("Q-free HJ %.3e (< 1e-4), Q-inclusive %.3e (> 1e-2), ",
                   hj_free, hj_q) +
               fmt("single-step |linear - classical| %.3e (< 1e-10)", step_diff);
    return r;
}

CriterionResult c11_symplectic_suite() {
    CriterionResult r{11, "symplectic invariance and RS saturation", 0, 1e-9,
                      false, 0, ""};
    std::mt19937_64 rng(777);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 3;
        const int d = 2 * n;
        Eigen::MatrixXd m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m(i, j) = normal(rng);
        QuadraticForm q;
        q.n = n;
        q.E = 1.0;
        q.A = m.transpose() * m + 0.5 * Eigen::MatrixXd::Identity(d, d);

        const Eigen::MatrixXd s = random_symplectic(n, 1000 + rep);
        QuadraticForm qc;
        qc.n = n;
        qc.E = 1.0;
        qc.A = s.transpose() * q.A * s;

        const auto nu0 = williamson_spectrum(q).nu;
        const auto nu1 = williamson_spectrum(qc).nu;
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(nu0[k] - nu1[k]) / nu0[k]);
        const double c0 = capacity_quadratic(q);
        const double c1 = capacity_quadratic(qc);
        worst = std::max(worst, std::abs(c0 - c1) / c0);
    }

    const StateSpec spec = coherent_spec();
    const WaveField wf = realize(spec, default_grid(spec));
    const RsCheckResult rs = rs_check(covariance_matrix(wf), spec.params.hbar);
    const double margin = std::abs(rs.margin);

    r.value = worst;
    r.pass = worst < 1e-9 && margin < 1e-10;
    r.detail = fmt("max spectrum/capacity deviation %.3e over 200 conjugations, ",
                   worst) +
               fmt("|RS saturation margin| %.3e (tol 1e-10)", margin);
    return r;
}

CriterionResult timed(CriterionResult (*f)()) {
    const auto t0 = clock_type::now();
    CriterionResult r = f();
    r.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    return r;
}

} // namespace

CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return timed(c1_oscillator_qpot);
        case 2: return timed(c2_force_balance);
        case 3: return timed(c3_energy_identity);
        case 4: return timed(c4_fermi_capacity);
        case 5: return timed(c5_blob_ratios);
        case 6: return timed(c6_fermi_residual);
        case 7: return timed(c7_madelung_equivalence);
        case 8: return timed(c8_stationarity);
        case 9: return timed(c9_free_packet);
        case 10: return timed(c10_classical_equation);
        case 11: return timed(c11_symplectic_suite);
        default: throw Error("run_criterion: id must be 1..11");
    }
}

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "oscillator") return {1, 2, 3, 6};
    if (suite == "well") return {3};
    if (suite == "dynamics") return {7, 8, 9, 10};
    if (suite == "symplectic") return {4, 5, 11};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    throw Error("unknown suite '" + suite +
                "' (expected oscillator|well|dynamics|symplectic|all)");
}

std::vector<CriterionResult> run_suite(const std::string& suite) {
    const std::vector<int> ids = suite_criteria(suite);
    std::vector<CriterionResult> out;
    double total = 0.0;
    bool all_pass = true;
    for (int id : ids) {
        if (id == 12) continue;
        CriterionResult r = run_criterion(id);
        total += r.seconds;
        all_pass = all_pass && r.pass;
        out.push_back(std::move(r));
    }
    if (std::find(ids.begin(), ids.end(), 12) != ids.end()) {
        CriterionResult agg{12, "full suite runtime budget", total, 600.0,
                            all_pass && total < 600.0, 0.0, ""};
        agg.detail = std::string("criteria 1-11 ") +
                     (all_pass ? "all passed" : "had failures") +
                     fmt(" in %.1f s (budget 600 s)", total);
        out.push_back(std::move(agg));
    }
    return out;
}

} // namespace qps
