#ifndef QPS_STATES_HPP
#define QPS_STATES_HPP

#include <functional>
#include <string>

#include "qps/field.hpp"

namespace qps {

enum class StateKind {
    Coherent3d,     // ground state of the 3D isotropic harmonic oscillator
    Oscillator1d,   // n-th 1D harmonic oscillator eigenstate
    Well1d,         // n-th infinite-well eigenstate on (0, L)
    GaussianPacket, // 1D Gaussian, center x0, boost p0, amplitude width 2*sigma^2
    PlaneModulated, // 1D Gaussian envelope times exp(i p0 x / hbar)
};

struct StateSpec {
    StateKind kind = StateKind::Coherent3d;
    PhysicsParams params;
    double omega = 1.0; // oscillator kinds
    int n = 0;          // quantum number (oscillator: n >= 0, well: n >= 1)
    double L = 1.0;     // well width
    double x0 = 0.0;    // packet center
    double p0 = 0.0;    // packet momentum
    double sigma = 1.0; // packet width (Delta x at t = 0)

    void validate() const;
    bool is_eigenstate() const;
    std::string kind_name() const;
};

// Sample the closed form on the grid and normalize. Throws if the grid
// truncates more than 1e-10 of the state's mass, or (well states) if the
// grid is not exactly (0, L) non-periodic.
WaveField realize(const StateSpec& spec, const Grid& grid);

// Exact eigenenergy; throws NotAnEigenstateError for packet kinds.
double exact_energy(const StateSpec& spec);

// The external potential as a field generator on any grid.
std::function<ScalarField(const Grid&)> exact_potential(const StateSpec& spec);

// Default verification grid for a spec (8-sigma extents so that boundary
// values sit at the 1e-14 level and spectral tails do not limit accuracy).
Grid default_grid(const StateSpec& spec, int npts = 64);

} // namespace qps

#endif
