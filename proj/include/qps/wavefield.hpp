#ifndef QPS_WAVEFIELD_HPP
#define QPS_WAVEFIELD_HPP

#include "qps/field.hpp"

namespace qps {

// eps_node is an absolute amplitude threshold; pass <= 0 to use the
// default 1e-6 * max R. Points with R below it are masked: the phase,
// Bohm momentum and quantum potential are 0/0 there and carry no value.

double default_eps_node(const WaveField& wf);

// psi = R exp(iS/hbar). S is the principal branch of hbar*arg(psi),
// stored mod 2*pi*hbar; gradients of S must never be taken from this
// representation (see bohm_momentum_field).
PolarField polar_decompose(const WaveField& wf, double eps_node = 0.0);

// rho = |psi|^2
ScalarField density(const WaveField& wf);

// grad S = hbar * Im(conj(psi) grad psi) / |psi|^2, gauge-safe (no phase
// unwrapping). Masked at nodes.
VectorField bohm_momentum_field(const WaveField& wf, double eps_node = 0.0);

// j = rho grad S / m = hbar Im(conj(psi) grad psi) / m, computed without
// dividing by rho so it is globally defined and -> 0 at nodes.
VectorField probability_current(const WaveField& wf);

// Q = -(hbar^2/2m) lap(R)/R; spectral Laplacian on periodic grids,
// 4th-order finite differences otherwise. Masked at nodes.
ScalarField quantum_potential(const WaveField& wf, double eps_node = 0.0);

// F_Q = -grad Q via local mask-aware 4th-order stencils. The output mask
// is the input mask dilated by the stencil radius.
VectorField quantum_force(const ScalarField& q);

// Phase-space second moments, ordering (x..., p...). Position moments by
// quadrature over rho, momentum moments via p_hat = -i hbar grad applied
// spectrally (periodic) or by finite differences (bounded), cross terms
// as Re<psi| x p |psi> - <x><p> (the symmetrized Weyl value).
CovarianceMatrix covariance_matrix(const WaveField& wf);

} // namespace qps

#endif
