#ifndef QPS_DYNAMICS_HPP
#define QPS_DYNAMICS_HPP

#include <array>
#include <functional>
#include <vector>

#include "qps/field.hpp"

namespace qps {

struct PropagationConfig {
    double dt = 1e-3;
    int n_steps = 1;
    int record_every = 1;
    std::function<ScalarField(const Grid&)> potential; // null means V = 0
    // classical propagation: recompute Q after the kinetic step for the
    // second potential half-step (default refreshes once per step, from
    // the pre-step frame; that lag is the dominant error term).
    bool half_step_q_refresh = false;
    double norm_drift_tol = 1e-6;

    void validate() const {
        if (!(dt > 0.0)) throw Error("PropagationConfig: dt must be positive");
        if (n_steps < 1) throw Error("PropagationConfig: n_steps >= 1 required");
        if (record_every < 1) throw Error("PropagationConfig: record_every >= 1");
    }
};

// Advisory splitting-accuracy heuristic: dt * E_max / hbar, E_max being
// the grid's maximal kinetic scale plus the potential range.
double stability_number(const WaveField& wf0, const PropagationConfig& cfg);

struct Timeseries {
    std::vector<double> times;
    std::vector<WaveField> frames;

    double frame_spacing() const; // uniform spacing; throws if non-uniform
};

// Second-order Strang splitting for i hbar dpsi/dt = -(hbar^2/2m) lap psi
// + V psi. Periodic grids use the Fourier kinetic factor; bounded grids a
// Dirichlet sine basis (hard walls). Records wf0 plus every record_every
// steps. Aborts with PropagationError if the norm drifts by more than
// cfg.norm_drift_tol.
Timeseries propagate_schrodinger(const WaveField& wf0, const PropagationConfig& cfg,
                                 double t0 = 0.0);

// Same splitting for the nonlinear equation with the internal energy
// removed: i hbar dpsi/dt = -((hbar^2/2m) lap + Q[psi]) psi + V psi,
// i.e. effective potential V - Q with Q recomputed from the evolving
// frame. Requires a nodeless initial state; halts with
// NodeFormationError if an interior node forms.
Timeseries propagate_classical_nonlinear(const WaveField& wf0,
                                         const PropagationConfig& cfg,
                                         double t0 = 0.0);

struct MadelungResiduals {
    std::vector<double> times;         // interior frame times
    std::vector<ScalarField> hj;       // HJ residual, spatial mean removed
    std::vector<double> hj_offset;     // the removed constant per frame
    std::vector<ScalarField> continuity;

    // max |value| over off-mask verification-interior points, all frames
    double max_hj() const;
    double max_continuity() const;
};

// Residuals of dS/dt + |grad S|^2/2m [+ Q] + V = 0 and
// drho/dt + div(rho grad S / m) = 0 on a uniformly spaced timeseries.
// dS/dt is evaluated gauge-safely as hbar Im(psid/psi) with centered
// time differences. include_q = false gives the classical (Q-free)
// Hamilton-Jacobi residual.
MadelungResiduals madelung_residuals(const Timeseries& ts, const ScalarField& v,
                                     bool include_q = true);

struct Trajectory {
    enum class Status { Ok, Exited, NodeCollision };
    std::vector<double> times;
    std::vector<std::array<double, 3>> pos; // recorded at frame times
    Status status = Status::Ok;
    bool seed_snapped = false; // seed moved to the nearest off-mask point
};

struct TrajectoryEnsemble {
    std::vector<Trajectory> paths;
};

// Classic 4th-order integration of dr/dt = grad S(r,t)/m with cubic
// spatial and linear temporal interpolation of the velocity field.
TrajectoryEnsemble integrate_bohm_trajectories(
    const Timeseries& ts, const std::vector<std::array<double, 3>>& seeds,
    int substeps);

struct NodeInfo {
    int index = 0;  // grid index of the node cell
    double x = 0.0; // node location
    std::vector<double> shell_distance; // distance from the node
    std::vector<double> shell_q;        // Q on the shell (1D: pair average)
    bool q_constant = false;            // Q flat across shells within 1e-3
    double q_shell_mean = 0.0;
};

struct NodeReport {
    double eps_node = 0.0;
    std::vector<NodeInfo> nodes;
};

// 1D node census: amplitude minima below eps_node (walls of bounded grids
// excluded) and the measured behavior of Q on shells around each node.
NodeReport node_diagnostics(const WaveField& wf, int n_shells = 8);

} // namespace qps

#endif
