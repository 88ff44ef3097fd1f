#ifndef QPS_FERMI_HPP
#define QPS_FERMI_HPP

#include <array>

#include "qps/field.hpp"
#include "qps/states.hpp"
#include "qps/symplectic.hpp"

namespace qps {

// Classical symbol H_F(r,p) = |p - grad S0(r)|^2 / 2m - Q0(r) of the
// operator annihilating the state it was built from.
struct FermiHamiltonian {
    VectorField grad_s0; // Bohm momentum field of the source state
    ScalarField q0;      // quantum potential of the source state
    PhysicsParams params;
};

FermiHamiltonian build_fermi_hamiltonian(const WaveField& wf);

// H_F evaluated at an off-grid phase-space point; fields are interpolated
// with local cubic (Catmull-Rom) kernels, periodic wrap on periodic grids.
// Throws OutOfDomainError if r lies outside the grid.
double eval_fermi(const FermiHamiltonian& fh,
                  const std::array<double, 3>& r,
                  const std::array<double, 3>& p);

// || H_F_hat psi || / || psi || over off-mask points. Zero up to
// discretization error for any smooth state.
double fermi_operator_residual(const WaveField& wf);

struct EnergyDecomposition {
    ScalarField kinetic;   // |grad S|^2 / 2m
    ScalarField quantum;   // Q
    ScalarField potential; // V
    ScalarField total;     // pointwise sum
};

EnergyDecomposition energy_decomposition(const WaveField& wf, const ScalarField& v);

// max over off-mask interior of |V + Q - E|; requires a real-up-to-phase
// state (throws PreconditionError otherwise).
double stationary_identity_check(const WaveField& wf, const ScalarField& v, double e);

// F_c + F_Q = -grad V - grad Q; ~0 off-mask for real eigenstates.
VectorField force_balance_field(const WaveField& wf, const ScalarField& v);

// Closed-form Fermi set {z : z^T A z / 2 <= E} for oscillator ground
// states; throws NoClosedFormError for other kinds.
QuadraticForm fermi_set_quadratic(const StateSpec& spec);

} // namespace qps

#endif
