// qps: command-line frontend for the quantum phase-space toolkit.
//
//   qps run <scenario.json> [--out DIR] [--grid-override JSON]
//       [--hbar X] [--mass X] [--omega X] [--seed N]
//   qps verify <suite>          suite: oscillator|well|dynamics|symplectic|all
//
// Exit codes: 0 all declared checks pass, 1 a numerical check failed,
// 2 usage or schema error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"

#include "qps/dynamics.hpp"
#include "qps/fermi.hpp"
#include "qps/io.hpp"
#include "qps/region.hpp"
#include "qps/states.hpp"
#include "qps/symplectic.hpp"
#include "qps/verify.hpp"
#include "qps/wavefield.hpp"

namespace fs = std::filesystem;
using qps::io::json;

namespace {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct TaskReport {
    std::string task;
    json metrics = json::object();
    std::vector<Check> checks;
};

struct ScenarioContext {
    qps::StateSpec spec;
    qps::Grid grid;
    fs::path out_dir;
    std::uint64_t seed = 1;
    // lazily realized state shared by the tasks
    std::optional<qps::WaveField> wf;

    const qps::WaveField& state() {
        if (!wf) wf = qps::realize(spec, grid);
        return *wf;
    }
};

json check_to_json(const Check& c) {
    return {{"name", c.name},
            {"value", c.value},
            {"tolerance", c.tolerance},
            {"pass", c.pass}};
}

double opt_num(const json& task, const char* key, double fallback) {
    return task.value(key, fallback);
}

qps::PropagationConfig propagation_config(const json& task,
                                          const ScenarioContext& ctx,
                                          bool with_potential) {
    qps::PropagationConfig cfg;
    cfg.dt = opt_num(task, "dt", 1e-3);
    cfg.n_steps = static_cast<int>(opt_num(task, "steps", 100));
    cfg.record_every = static_cast<int>(opt_num(task, "record_every", 10));
    cfg.half_step_q_refresh = task.value("half_step_q_refresh", false);
    if (with_potential && task.value("potential", "exact") == "exact")
        cfg.potential = qps::exact_potential(ctx.spec);
    return cfg;
}

// Runs one analysis task, writes its artifacts, returns its summary entry.
TaskReport run_task(const json& task, ScenarioContext& ctx) {
    const std::string name = task.at("task").get<std::string>();
    TaskReport rep;
    rep.task = name;

    if (name == "decompose") {
        const qps::PolarField pf = qps::polar_decompose(ctx.state());
        qps::ScalarField r(ctx.grid), s(ctx.grid);
        r.values = pf.R;
        s.values = pf.S;
        s.mask = pf.node_mask;
        qps::io::write_scalar_csv(ctx.out_dir / "amplitude.csv", r);
        qps::io::write_scalar_csv(ctx.out_dir / "phase_action.csv", s);
        rep.metrics["masked_points"] =
            std::count(pf.node_mask.begin(), pf.node_mask.end(), 1);
    } else if (name == "qpot") {
        const qps::ScalarField q = qps::quantum_potential(ctx.state());
        qps::io::write_scalar_csv(ctx.out_dir / "quantum_potential.csv", q);
        // value at the grid point closest to the coordinate origin
        double best = std::numeric_limits<double>::infinity();
        double q0 = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q.masked(i)) continue;
            const auto p = ctx.grid.point(i);
            const double d2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            if (d2 < best) {
                best = d2;
                q0 = q.values[i];
            }
        }
        rep.metrics["q_at_origin"] = q0;
        if (ctx.spec.is_eigenstate()) {
            const double tol = opt_num(task, "tol", 1e-5);
            const double dev = qps::stationary_identity_check(
                ctx.state(), qps::exact_potential(ctx.spec)(ctx.grid),
                qps::exact_energy(ctx.spec));
            rep.checks.push_back(
                {"max interior |V + Q - E|", dev, tol, dev < tol});
        }
    } else if (name == "energy") {
        const qps::ScalarField v = task.value("potential", "exact") == "exact"
                                       ? qps::exact_potential(ctx.spec)(ctx.grid)
                                       : qps::ScalarField(ctx.grid);
        const qps::EnergyDecomposition ed =
            qps::energy_decomposition(ctx.state(), v);
        qps::io::write_scalar_csv(ctx.out_dir / "energy_total.csv", ed.total);
        qps::io::write_scalar_csv(ctx.out_dir / "energy_kinetic.csv", ed.kinetic);
        qps::io::write_scalar_csv(ctx.out_dir / "energy_quantum.csv", ed.quantum);
        if (ctx.spec.is_eigenstate()) {
            const double e = qps::exact_energy(ctx.spec);
            const double tol = opt_num(task, "tol", 1e-5);
            const double dev = qps::stationary_identity_check(ctx.state(), v, e);
            rep.metrics["exact_energy"] = e;
            rep.checks.push_back({"max interior |V + Q - E|", dev, tol, dev < tol});
        }
    } else if (name == "fermi-residual") {
        const double res = qps::fermi_operator_residual(ctx.state());
        const double tol = opt_num(task, "tol", 1e-7);
        rep.metrics["residual"] = res;
        rep.checks.push_back({"|H_F psi| / |psi|", res, tol, res < tol});
    } else if (name == "fermi-surface") {
        const qps::FermiHamiltonian fh = qps::build_fermi_hamiltonian(ctx.state());
        qps::io::write_vector_csv(ctx.out_dir / "fermi_grad_s0.csv", fh.grad_s0);
        qps::io::write_scalar_csv(ctx.out_dir / "fermi_q0.csv", fh.q0);
        // on-shell check: H_F(r, grad S0(r)) = -Q0(r); report the max
        // residual against that identity at off-mask grid points
        double dev = 0.0;
        for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
            if (fh.q0.masked(i) || !qps::in_verification_interior(ctx.grid, i))
                continue;
            std::array<double, 3> p{0.0, 0.0, 0.0};
            for (int a = 0; a < ctx.grid.dim; ++a) p[a] = fh.grad_s0.comp[a][i];
            try {
                const double h = qps::eval_fermi(fh, ctx.grid.point(i), p);
                dev = std::max(dev, std::abs(h + fh.q0.values[i]));
            } catch (const qps::PreconditionError&) {
                // interpolation stencil touches the node mask; skip
            }
        }
        rep.metrics["max_onshell_residual"] = dev;
    } else if (name == "capacity") {
        const qps::QuadraticForm q = qps::fermi_set_quadratic(ctx.spec);
        const double c = qps::capacity_quadratic(q);
        rep.metrics["capacity"] = c;
        rep.metrics["capacity_over_h"] =
            c / (2.0 * std::numbers::pi * ctx.spec.params.hbar);
        if (task.contains("expect")) {
            const double expect = task.at("expect").get<double>();
            const double tol = opt_num(task, "tol", 1e-12);
            const double err = std::abs(c - expect) / std::abs(expect);
            rep.checks.push_back({"capacity rel err", err, tol, err < tol});
        }
    } else if (name == "blob-check") {
        const auto b = qps::quantum_blob_contained(
            qps::fermi_set_quadratic(ctx.spec), ctx.spec.params.hbar);
        rep.metrics["ratio"] = b.ratio;
        rep.checks.push_back({"c >= h/2 (ratio >= 1)", b.ratio, 1.0, b.pass});
    } else if (name == "rs-check") {
        const auto rs =
            qps::rs_check(qps::covariance_matrix(ctx.state()), ctx.spec.params.hbar);
        rep.metrics["margin"] = rs.margin;
        rep.checks.push_back({"min nu(Sigma) - hbar/2 >= 0", rs.margin, 0.0, rs.pass});
    } else if (name == "evolve" || name == "evolve-classical") {
        const auto cfg = propagation_config(task, ctx, true);
        const qps::Timeseries ts =
            name == "evolve" ? qps::propagate_schrodinger(ctx.state(), cfg)
                             : qps::propagate_classical_nonlinear(ctx.state(), cfg);
        qps::io::write_timeseries(ctx.out_dir / (name == "evolve" ? "frames"
                                                                  : "frames_classical"),
                                  ts);
        rep.metrics["frames"] = ts.frames.size();
        rep.metrics["t_final"] = ts.times.back();
        rep.metrics["norm_drift"] = std::abs(ts.frames.back().norm_squared() -
                                             ts.frames.front().norm_squared());
    } else if (name == "residuals") {
        const auto cfg = propagation_config(task, ctx, true);
        const bool classical = task.value("classical", false);
        const qps::Timeseries ts =
            classical ? qps::propagate_classical_nonlinear(ctx.state(), cfg)
                      : qps::propagate_schrodinger(ctx.state(), cfg);
        const qps::ScalarField v = task.value("potential", "exact") == "exact"
                                       ? qps::exact_potential(ctx.spec)(ctx.grid)
                                       : qps::ScalarField(ctx.grid);
        const bool include_q = task.value("include_q", !classical);
        const auto res = qps::madelung_residuals(ts, v, include_q);
        rep.metrics["max_hj"] = res.max_hj();
        rep.metrics["max_continuity"] = res.max_continuity();
        rep.metrics["include_q"] = include_q;
        if (task.contains("hj_tol")) {
            const double tol = task.at("hj_tol").get<double>();
            rep.checks.push_back({"max HJ residual", res.max_hj(), tol,
                                  res.max_hj() < tol});
        }
        if (task.contains("continuity_tol")) {
            const double tol = task.at("continuity_tol").get<double>();
            rep.checks.push_back({"max continuity residual", res.max_continuity(),
                                  tol, res.max_continuity() < tol});
        }
    } else if (name == "trajectories") {
        const auto cfg = propagation_config(task, ctx, true);
        const qps::Timeseries ts = qps::propagate_schrodinger(ctx.state(), cfg);
        const int count = static_cast<int>(opt_num(task, "count", 32));
        std::mt19937_64 rng(ctx.seed);
        std::vector<std::array<double, 3>> seeds;
        for (int k = 0; k < count; ++k) {
            std::array<double, 3> s{0.0, 0.0, 0.0};
            for (int a = 0; a < ctx.grid.dim; ++a) {
                const double lo = ctx.grid.lower[a], hi = ctx.grid.upper[a];
                const double mid = 0.5 * (lo + hi), half = 0.25 * (hi - lo);
                std::uniform_real_distribution<double> u(mid - half, mid + half);
                s[a] = u(rng);
            }
            seeds.push_back(s);
        }
        const auto ens = qps::integrate_bohm_trajectories(
            ts, seeds, static_cast<int>(opt_num(task, "substeps", 4)));
        qps::io::write_trajectories_csv(ctx.out_dir / "trajectories.csv", ens);
        double moved = 0.0;
        int aborted = 0;
        for (std::size_t p = 0; p < ens.paths.size(); ++p) {
            const auto& tr = ens.paths[p];
            if (tr.status != qps::Trajectory::Status::Ok) ++aborted;
            double d2 = 0.0;
            for (int a = 0; a < 3; ++a) {
                const double d = tr.pos.back()[a] - tr.pos.front()[a];
                d2 += d * d;
            }
            moved = std::max(moved, std::sqrt(d2));
        }
        rep.metrics["paths"] = ens.paths.size();
        rep.metrics["aborted"] = aborted;
        rep.metrics["max_displacement"] = moved;
        if (task.contains("displacement_tol")) {
            const double tol = task.at("displacement_tol").get<double>();
            rep.checks.push_back({"max displacement", moved, tol, moved < tol});
        }
    } else if (name == "nodes") {
        const qps::NodeReport nr = qps::node_diagnostics(ctx.state());
        json nodes = json::array();
        for (const auto& node : nr.nodes)
            nodes.push_back({{"index", node.index},
                             {"x", node.x},
                             {"q_constant", node.q_constant},
                             {"q_shell_mean", node.q_shell_mean}});
        qps::io::write_json(ctx.out_dir / "nodes.json",
                            {{"eps_node", nr.eps_node}, {"nodes", nodes}});
        rep.metrics["node_count"] = nr.nodes.size();
        rep.metrics["nodes"] = nodes;
    } else {
        throw qps::Error("unknown task '" + name + "'");
    }
    return rep;
}

int cmd_run(const fs::path& scenario_path, const std::string& out_override,
            const std::string& grid_override, double hbar, double mass,
            double omega, long long seed) {
    const json scenario = qps::io::read_json(scenario_path);
    if (!scenario.is_object())
        throw qps::Error(scenario_path.string() + ": scenario must be an object");

    ScenarioContext ctx;
    qps::PhysicsParams params;
    if (scenario.contains("physics")) {
        params.hbar = scenario["physics"].value("hbar", 1.0);
        params.mass = scenario["physics"].value("mass", 1.0);
    }
    if (hbar > 0.0) {
        std::cerr << "note: --hbar overrides scenario value\n";
        params.hbar = hbar;
    }
    if (mass > 0.0) {
        std::cerr << "note: --mass overrides scenario value\n";
        params.mass = mass;
    }
    params.validate();

    ctx.spec = qps::io::state_spec_from_json(scenario.at("state"), params);
    if (omega > 0.0) {
        std::cerr << "note: --omega overrides scenario value\n";
        ctx.spec.omega = omega;
        ctx.spec.validate();
    }
    if (!grid_override.empty()) {
        std::cerr << "note: --grid-override replaces the scenario grid\n";
        ctx.grid = qps::io::grid_from_json(json::parse(grid_override));
    } else if (scenario.contains("grid")) {
        ctx.grid = qps::io::grid_from_json(scenario["grid"]);
    } else {
        ctx.grid = qps::default_grid(ctx.spec);
    }
    ctx.seed = scenario.value("seed", 1);
    if (seed >= 0) {
        std::cerr << "note: --seed overrides scenario value\n";
        ctx.seed = static_cast<std::uint64_t>(seed);
    }
    ctx.out_dir = out_override.empty()
                      ? fs::path(scenario.value("output_dir", "out"))
                      : fs::path(out_override);
    fs::create_directories(ctx.out_dir);

    const json tasks = scenario.value("analysis", json::array());
    if (!tasks.is_array())
        throw qps::Error(scenario_path.string() + ": 'analysis' must be an array");
    // validate task names up front so a typo fails before any work runs
    for (const auto& t : tasks)
        if (!t.is_object() || !t.contains("task"))
            throw qps::Error(scenario_path.string() +
                             ": every analysis entry needs a 'task' key");

    json summary;
    summary["schema"] = "qps-summary/1";
    summary["scenario"] = scenario_path.string();
    summary["state"] = qps::io::state_spec_to_json(ctx.spec);
    summary["grid"] = qps::io::grid_to_json(ctx.grid);
    summary["physics"] = {{"hbar", params.hbar}, {"mass", params.mass}};
    summary["tasks"] = json::array();

    bool all_pass = true;
    std::string first_failure;
    for (const auto& t : tasks) {
        TaskReport rep = run_task(t, ctx);
        json jt;
        jt["task"] = rep.task;
        jt["metrics"] = rep.metrics;
        jt["checks"] = json::array();
        for (const auto& c : rep.checks) {
            jt["checks"].push_back(check_to_json(c));
            if (!c.pass && first_failure.empty()) first_failure = rep.task;
            all_pass = all_pass && c.pass;
        }
        summary["tasks"].push_back(std::move(jt));
        std::cout << "task " << rep.task;
        for (const auto& c : rep.checks)
            std::cout << " | " << c.name << " = " << qps::io::format_double(c.value)
                      << " (tol " << qps::io::format_double(c.tolerance) << ") "
                      << (c.pass ? "pass" : "FAIL");
        std::cout << '\n';
    }
    summary["all_checks_pass"] = all_pass;
    qps::io::write_json(ctx.out_dir / "summary.json", summary);
    if (!all_pass) {
        std::cerr << "check failed in task '" << first_failure << "'\n";
        return 1;
    }
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_file) {
    const auto results = qps::run_suite(suite); // throws on unknown suite
    json verdict;
    verdict["schema"] = "qps-verify/1";
    verdict["suite"] = suite;
    verdict["criteria"] = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        verdict["criteria"].push_back({{"id", r.id},
                                       {"name", r.name},
                                       {"value", r.value},
                                       {"tolerance", r.tolerance},
                                       {"pass", r.pass},
                                       {"seconds", r.seconds},
                                       {"detail", r.detail}});
        all_pass = all_pass && r.pass;
        std::printf("criterion %2d [%s] %s — %s\n", r.id,
                    r.pass ? "pass" : "FAIL", r.name.c_str(), r.detail.c_str());
    }
    verdict["all_pass"] = all_pass;
    if (!out_file.empty()) qps::io::write_json(out_file, verdict);
    else std::cout << verdict.dump(2) << '\n';
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum phase-space toolkit"};
    app.require_subcommand(1);

    std::string scenario, out_dir, grid_override, suite, verify_out;
    double hbar = -1.0, mass = -1.0, omega = -1.0;
    long long seed = -1;

    auto* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (overrides scenario)");
    run->add_option("--grid-override", grid_override, "grid as inline JSON");
    run->add_option("--hbar", hbar, "override hbar");
    run->add_option("--mass", mass, "override mass");
    run->add_option("--omega", omega, "override oscillator frequency");
    run->add_option("--seed", seed, "override RNG seed");

    auto* verify = app.add_subcommand("verify", "run an acceptance suite");
    verify->add_option("suite", suite,
                       "oscillator|well|dynamics|symplectic|all")->required();
    verify->add_option("--out", verify_out, "write the JSON verdict here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed())
            return cmd_run(scenario, out_dir, grid_override, hbar, mass, omega, seed);
        return cmd_verify(suite, verify_out);
    } catch (const qps::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
