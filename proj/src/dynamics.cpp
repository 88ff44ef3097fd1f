#include "qps/dynamics.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

#include "qps/diffops.hpp"
#include "qps/interp.hpp"
#include "qps/region.hpp"
#include "qps/wavefield.hpp"

namespace qps {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One Strang splitting engine per propagation run. Periodic grids use the
// complex FFT; bounded grids a Dirichlet sine transform on the interior
// points (hard walls, psi = 0 at both ends).
class SplitStepEngine {
  public:
    SplitStepEngine(const Grid& g, const PhysicsParams& p, double dt)
        : grid_(g), params_(p), dt_(dt) {
        if (g.periodic) {
            fft_ = std::make_unique<Fft>(g);
            kin_factor_.resize(g.size());
            std::size_t idx = 0;
            const int n0 = g.n[0], n1 = (g.dim > 1 ? g.n[1] : 1),
                      n2 = (g.dim > 2 ? g.n[2] : 1);
            for (int j0 = 0; j0 < n0; ++j0)
                for (int j1 = 0; j1 < n1; ++j1)
                    for (int j2 = 0; j2 < n2; ++j2, ++idx) {
                        int jm[3] = {j0, j1, j2};
                        double k2 = 0.0;
                        for (int a = 0; a < g.dim; ++a) {
                            const double k = Fft::wavenumber(g, a, jm[a]);
                            k2 += k * k;
                        }
                        const double theta = p.hbar * k2 * dt / (2.0 * p.mass);
                        kin_factor_[idx] = cdouble(std::cos(theta), -std::sin(theta));
                    }
        } else {
            if (g.dim != 1)
                throw Error("propagation: bounded grids supported in 1D only");
            n_int_ = g.n[0] - 2;
            buf_.resize(n_int_);
            const double L = g.extent(0);
            kin_factor_.resize(n_int_);
            for (int j = 0; j < n_int_; ++j) {
                const double k = (j + 1) * std::numbers::pi / L;
                const double theta = p.hbar * k * k * dt / (2.0 * p.mass);
                kin_factor_[j] = cdouble(std::cos(theta), -std::sin(theta));
            }
            std::lock_guard lock(planner_mutex());
            dst_ = fftw_plan_r2r_1d(n_int_, buf_.data(), buf_.data(), FFTW_RODFT00,
                                    FFTW_ESTIMATE);
            if (!dst_) throw Error("propagation: DST plan creation failed");
        }
    }

    ~SplitStepEngine() {
        if (dst_) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(dst_);
        }
    }

    void kinetic_full_step(std::vector<cdouble>& psi) {
        if (fft_) {
            fft_->forward(psi);
            for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= kin_factor_[i];
            fft_->backward(psi);
            return;
        }
        // Dirichlet: DST-I of real and imaginary parts of the interior
        const double scale = 1.0 / (2.0 * (n_int_ + 1));
        std::vector<cdouble> modes(n_int_);
        for (int part = 0; part < 2; ++part) {
            for (int j = 0; j < n_int_; ++j)
                buf_[j] = (part == 0) ? psi[j + 1].real() : psi[j + 1].imag();
            fftw_execute(dst_);
            for (int j = 0; j < n_int_; ++j)
                reinterpret_cast<double*>(&modes[j])[part] = buf_[j];
        }
        for (int j = 0; j < n_int_; ++j) modes[j] *= kin_factor_[j];
        for (int part = 0; part < 2; ++part) {
            for (int j = 0; j < n_int_; ++j)
                buf_[j] = reinterpret_cast<const double*>(&modes[j])[part];
            fftw_execute(dst_);
            for (int j = 0; j < n_int_; ++j) {
                double* z = reinterpret_cast<double*>(&psi[j + 1]);
                z[part] = buf_[j] * scale;
            }
        }
        psi.front() = 0.0;
        psi.back() = 0.0;
    }

    // exp(-i V dt / (2 hbar)) applied pointwise
    void potential_half_step(std::vector<cdouble>& psi,
                             const std::vector<double>& v_eff) const {
        const double c = dt_ / (2.0 * params_.hbar);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            const double th = c * v_eff[i];
            psi[i] *= cdouble(std::cos(th), -std::sin(th));
        }
    }

  private:
    Grid grid_;
    PhysicsParams params_;
    double dt_;
    std::unique_ptr<Fft> fft_;
    std::vector<cdouble> kin_factor_;
    fftw_plan dst_ = nullptr;
    int n_int_ = 0;
    std::vector<double> buf_;
};

double norm_squared_of(const Grid& g, const std::vector<cdouble>& psi) {
    KahanSum s;
    for (const auto& z : psi) s.add(std::norm(z));
    return s.value() * g.cell_volume();
}

void check_interior_nodeless(const WaveField& wf, const char* who) {
    const double eps = default_eps_node(wf);
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (!in_verification_interior(wf.grid, i)) continue;
        if (std::abs(wf.psi[i]) < eps)
            throw NodeFormationError(std::string(who) +
                                     ": node inside the interior region");
    }
}

} // namespace

double stability_number(const WaveField& wf0, const PropagationConfig& cfg) {
    const Grid& g = wf0.grid;
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        const double kmax = std::numbers::pi / g.spacing(a);
        k2 += kmax * kmax;
    }
    double e_max = wf0.params.hbar * wf0.params.hbar * k2 / (2.0 * wf0.params.mass);
    if (cfg.potential) {
        const ScalarField v = cfg.potential(g);
        for (double x : v.values) e_max = std::max(e_max, std::abs(x));
    }
    return cfg.dt * e_max / wf0.params.hbar;
}

double Timeseries::frame_spacing() const {
    if (times.size() < 2) throw Error("Timeseries: need >= 2 frames");
    const double d = times[1] - times[0];
    for (std::size_t i = 1; i + 1 < times.size(); ++i)
        if (std::abs((times[i + 1] - times[i]) - d) > 1e-9 * std::max(1.0, std::abs(d)))
            throw Error("Timeseries: non-uniform frame spacing");
    return d;
}

Timeseries propagate_schrodinger(const WaveField& wf0, const PropagationConfig& cfg,
                                 double t0) {
    cfg.validate();
    const Grid& g = wf0.grid;
    const std::vector<double> v =
        cfg.potential ? cfg.potential(g).values : std::vector<double>(g.size(), 0.0);

    SplitStepEngine engine(g, wf0.params, cfg.dt);
    WaveField wf = wf0;
    const double norm0 = wf.norm_squared();

    Timeseries ts;
    ts.times.push_back(t0);
    ts.frames.push_back(wf);
    for (int step = 1; step <= cfg.n_steps; ++step) {
        engine.potential_half_step(wf.psi, v);
        engine.kinetic_full_step(wf.psi);
        engine.potential_half_step(wf.psi, v);
        const double drift = std::abs(norm_squared_of(g, wf.psi) - norm0);
        if (drift > cfg.norm_drift_tol)
            throw PropagationError("propagate_schrodinger: norm drift " +
                                   std::to_string(drift) + " at step " +
                                   std::to_string(step));
        if (step % cfg.record_every == 0 || step == cfg.n_steps) {
            ts.times.push_back(t0 + step * cfg.dt);
            ts.frames.push_back(wf);
        }
    }
    return ts;
}

Timeseries propagate_classical_nonlinear(const WaveField& wf0,
                                         const PropagationConfig& cfg,
                                         double t0) {
    cfg.validate();
    const Grid& g = wf0.grid;
    check_interior_nodeless(wf0, "propagate_classical_nonlinear");
    const std::vector<double> v =
        cfg.potential ? cfg.potential(g).values : std::vector<double>(g.size(), 0.0);

    SplitStepEngine engine(g, wf0.params, cfg.dt);
    WaveField wf = wf0;
    const double norm0 = wf.norm_squared();
    std::vector<double> v_eff(g.size());

    auto effective_potential = [&](const WaveField& frame) {
        const ScalarField q = quantum_potential(frame, kDeepFloorRel * frame.max_abs());
        for (std::size_t i = 0; i < v_eff.size(); ++i)
            v_eff[i] = v[i] - q.values[i]; // internal energy removed
    };

    Timeseries ts;
    ts.times.push_back(t0);
    ts.frames.push_back(wf);
    for (int step = 1; step <= cfg.n_steps; ++step) {
        effective_potential(wf);
        engine.potential_half_step(wf.psi, v_eff);
        engine.kinetic_full_step(wf.psi);
        if (cfg.half_step_q_refresh) effective_potential(wf);
        engine.potential_half_step(wf.psi, v_eff);
        const double drift = std::abs(norm_squared_of(g, wf.psi) - norm0);
        if (drift > cfg.norm_drift_tol)
            throw PropagationError("propagate_classical_nonlinear: norm drift " +
                                   std::to_string(drift) + " at step " +
                                   std::to_string(step));
        check_interior_nodeless(wf, "propagate_classical_nonlinear");
        if (step % cfg.record_every == 0 || step == cfg.n_steps) {
            ts.times.push_back(t0 + step * cfg.dt);
            ts.frames.push_back(wf);
        }
    }
    return ts;
}

MadelungResiduals madelung_residuals(const Timeseries& ts, const ScalarField& v,
                                     bool include_q) {
    if (ts.frames.size() < 3)
        throw Error("madelung_residuals: need >= 3 frames");
    const double dt = ts.frame_spacing();
    const Grid& g = ts.frames.front().grid;
    if (!v.grid.same_as(g)) throw Error("madelung_residuals: potential grid mismatch");

    MadelungResiduals out;
    for (std::size_t f = 1; f + 1 < ts.frames.size(); ++f) {
        const WaveField& wm = ts.frames[f - 1];
        const WaveField& w0 = ts.frames[f];
        const WaveField& wp = ts.frames[f + 1];
        if (!wm.grid.same_as(g) || !wp.grid.same_as(g))
            throw Error("madelung_residuals: inconsistent frame grids");
        const double hbar = w0.params.hbar;
        const double m = w0.params.mass;
        const double eps = default_eps_node(w0);

        const VectorField grad_s = bohm_momentum_field(w0);
        ScalarField hj(g);
        hj.mask = grad_s.mask;
        ScalarField q;
        if (include_q) {
            q = quantum_potential(w0);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (q.masked(i)) hj.mask[i] = 1;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (hj.mask[i]) continue;
            const cdouble psid = (wp.psi[i] - wm.psi[i]) / (2.0 * dt);
            const double ds_dt = hbar * std::imag(psid / w0.psi[i]);
            double k2 = 0.0;
            for (int a = 0; a < g.dim; ++a)
                k2 += grad_s.comp[a][i] * grad_s.comp[a][i];
            hj.values[i] = ds_dt + k2 / (2.0 * m) + v.values[i];
            if (include_q) hj.values[i] += q.values[i];
        }
        // S carries a spatially constant gauge freedom per frame: remove
        // the interior mean and report it.
        KahanSum mean;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (hj.mask[i] || !in_verification_interior(g, i)) continue;
            mean.add(hj.values[i]);
            ++cnt;
        }
        const double offset = cnt ? mean.value() / static_cast<double>(cnt) : 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!hj.mask[i]) hj.values[i] -= offset;

        // continuity: centered drho/dt + div j, j formed without dividing
        // by rho so the divergence stays spectrally clean
        ScalarField cont(g);
        const VectorField j = probability_current(w0);
        for (int a = 0; a < g.dim; ++a) {
            auto dj = diffops::derivative(g, j.comp[a], a);
            for (std::size_t i = 0; i < g.size(); ++i) cont.values[i] += dj[i];
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double drho =
                (std::norm(wp.psi[i]) - std::norm(wm.psi[i])) / (2.0 * dt);
            cont.values[i] += drho;
        }
        (void)eps;

        out.times.push_back(ts.times[f]);
        out.hj.push_back(std::move(hj));
        out.hj_offset.push_back(offset);
        out.continuity.push_back(std::move(cont));
    }
    return out;
}

namespace {
double max_interior(const std::vector<ScalarField>& fields) {
    double m = 0.0;
    for (const auto& f : fields)
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f.masked(i) || !in_verification_interior(f.grid, i)) continue;
            m = std::max(m, std::abs(f.values[i]));
        }
    return m;
}
} // namespace

double MadelungResiduals::max_hj() const { return max_interior(hj); }
double MadelungResiduals::max_continuity() const { return max_interior(continuity); }

TrajectoryEnsemble integrate_bohm_trajectories(
    const Timeseries& ts, const std::vector<std::array<double, 3>>& seeds,
    int substeps) {
    if (ts.frames.size() < 2)
        throw Error("integrate_bohm_trajectories: need >= 2 frames");
    if (substeps < 1) throw Error("integrate_bohm_trajectories: substeps >= 1");
    const double dt = ts.frame_spacing();
    const Grid& g = ts.frames.front().grid;
    const int dim = g.dim;

    // per-frame Bohm velocity interpolators
    struct FrameVel {
        std::vector<CubicInterpolator> comp;
    };
    std::vector<FrameVel> vel;
    vel.reserve(ts.frames.size());
    for (const auto& frame : ts.frames) {
        const VectorField gs = bohm_momentum_field(frame);
        FrameVel fv;
        for (int a = 0; a < dim; ++a) {
            std::vector<double> v = gs.comp[a];
            for (auto& x : v) x /= frame.params.mass;
            fv.comp.emplace_back(g, v, gs.mask);
        }
        vel.push_back(std::move(fv));
    }

    auto evaluable = [&](std::size_t f, const std::array<double, 3>& r) {
        return vel[f].comp[0].evaluable(r);
    };
    auto velocity = [&](std::size_t f, double theta, const std::array<double, 3>& r) {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a)
            v[a] = (1.0 - theta) * vel[f].comp[a](r) + theta * vel[f + 1].comp[a](r);
        return v;
    };

    TrajectoryEnsemble ens;
    for (const auto& seed0 : seeds) {
        Trajectory traj;
        std::array<double, 3> r = seed0;
        if (!evaluable(0, r)) {
            // snap to the nearest grid point with an evaluable stencil
            double best = std::numeric_limits<double>::infinity();
            std::array<double, 3> best_r = r;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto pt = g.point(i);
                double d2 = 0.0;
                for (int a = 0; a < dim; ++a) d2 += (pt[a] - r[a]) * (pt[a] - r[a]);
                if (d2 < best && evaluable(0, pt)) {
                    best = d2;
                    best_r = pt;
                }
            }
            if (!std::isfinite(best))
                throw PreconditionError("integrate_bohm_trajectories: no off-mask seed");
            r = best_r;
            traj.seed_snapped = true;
        }
        traj.times.push_back(ts.times.front());
        traj.pos.push_back(r);

        bool alive = true;
        for (std::size_t f = 0; f + 1 < ts.frames.size() && alive; ++f) {
            const double h = dt / substeps;
            for (int s = 0; s < substeps; ++s) {
                const double th0 = static_cast<double>(s) / substeps;
                const double th_half = (s + 0.5) / substeps;
                const double th1 = static_cast<double>(s + 1) / substeps;
                try {
                    const auto k1 = velocity(f, th0, r);
                    std::array<double, 3> r2 = r, r3 = r, r4 = r;
                    for (int a = 0; a < dim; ++a) r2[a] += 0.5 * h * k1[a];
                    const auto k2 = velocity(f, th_half, r2);
                    for (int a = 0; a < dim; ++a) r3[a] += 0.5 * h * k2[a];
                    const auto k3 = velocity(f, th_half, r3);
                    for (int a = 0; a < dim; ++a) r4[a] += h * k3[a];
                    const auto k4 = velocity(f, th1, r4);
                    for (int a = 0; a < dim; ++a)
                        r[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
                } catch (const OutOfDomainError&) {
                    traj.status = Trajectory::Status::Exited;
                    alive = false;
                    break;
                } catch (const PreconditionError&) {
                    traj.status = Trajectory::Status::NodeCollision;
                    alive = false;
                    break;
                }
            }
            if (alive) {
                traj.times.push_back(ts.times[f + 1]);
                traj.pos.push_back(r);
            }
        }
        ens.paths.push_back(std::move(traj));
    }
    return ens;
}

NodeReport node_diagnostics(const WaveField& wf, int n_shells) {
    const Grid& g = wf.grid;
    if (g.dim != 1) throw Error("node_diagnostics: 1D states only");
    const int n = g.n[0];
    const double eps = default_eps_node(wf);
    const ScalarField q = quantum_potential(wf);

    // A node is an amplitude sign change between consecutive unmasked
    // cells (masked runs in between allowed). Deep-tail masked runs with
    // no sign change across them are underflow regions, not nodes; wall
    // cells of bounded grids are boundaries, not nodes.
    std::vector<int> node_cells;
    const int lo = g.periodic ? 0 : 1;
    const int hi = g.periodic ? n : n - 1;
    int prev = -1;
    for (int i = lo; i < hi; ++i) {
        if (std::abs(wf.psi[i]) < eps) continue;
        if (prev >= 0) {
            const double corr = std::real(std::conj(wf.psi[prev]) * wf.psi[i]);
            if (corr < 0.0) {
                int best = prev;
                for (int j = prev + 1; j <= i; ++j)
                    if (std::abs(wf.psi[j]) < std::abs(wf.psi[best])) best = j;
                node_cells.push_back(best);
            }
        }
        prev = i;
    }

    NodeReport report;
    report.eps_node = eps;
    for (int cell : node_cells) {
        NodeInfo info;
        info.index = cell;
        info.x = g.coord(0, cell);
        for (int d = 1; d <= n_shells; ++d) {
            KahanSum sum;
            int cnt = 0;
            for (int side = -1; side <= 1; side += 2) {
                int j = cell + side * d;
                if (g.periodic) j = ((j % n) + n) % n;
                if (j < 0 || j >= n) continue;
                if (q.masked(static_cast<std::size_t>(j))) continue;
                sum.add(q.values[static_cast<std::size_t>(j)]);
                ++cnt;
            }
            if (cnt == 0) continue;
            info.shell_distance.push_back(d * g.spacing(0));
            info.shell_q.push_back(sum.value() / cnt);
        }
        // flatness judged away from the node: the |psi| kink corrupts the
        // 5-point Laplacian within 2 cells of it
        KahanSum far;
        int far_cnt = 0;
        for (std::size_t s = 0; s < info.shell_q.size(); ++s) {
            if (info.shell_distance[s] < 3.0 * g.spacing(0) - 1e-12) continue;
            far.add(info.shell_q[s]);
            ++far_cnt;
        }
        if (far_cnt >= 2) {
            const double mean = far.value() / far_cnt;
            double dev = 0.0;
            for (std::size_t s = 0; s < info.shell_q.size(); ++s) {
                if (info.shell_distance[s] < 3.0 * g.spacing(0) - 1e-12) continue;
                dev = std::max(dev, std::abs(info.shell_q[s] - mean));
            }
            info.q_shell_mean = mean;
            info.q_constant = dev <= 1e-3 * std::max(1.0, std::abs(mean));
        }
        report.nodes.push_back(std::move(info));
    }
    return report;
}

} // namespace qps
