#include "qps/fermi.hpp"

#include <cmath>

#include "qps/diffops.hpp"
#include "qps/interp.hpp"
#include "qps/region.hpp"
#include "qps/wavefield.hpp"

namespace qps {

FermiHamiltonian build_fermi_hamiltonian(const WaveField& wf) {
    FermiHamiltonian fh;
    fh.grad_s0 = bohm_momentum_field(wf);
    fh.q0 = quantum_potential(wf);
    fh.params = wf.params;
    return fh;
}

double eval_fermi(const FermiHamiltonian& fh,
                  const std::array<double, 3>& r,
                  const std::array<double, 3>& p) {
    const Grid& g = fh.q0.grid;
    if (!g.periodic && !g.contains(r))
        throw OutOfDomainError("eval_fermi: position outside grid");
    CubicInterpolator qi(g, fh.q0.values, fh.q0.mask);
    double kin = 0.0;
    for (int a = 0; a < g.dim; ++a) {
        CubicInterpolator gi(g, fh.grad_s0.comp[a], fh.grad_s0.mask);
        const double d = p[a] - gi(r);
        kin += d * d;
    }
    return kin / (2.0 * fh.params.mass) - qi(r);
}

double fermi_operator_residual(const WaveField& wf) {
    const Grid& g = wf.grid;
    const double hbar = wf.params.hbar;
    const double m = wf.params.mass;
    const double eps_deep = kDeepFloorRel * wf.max_abs();

    // grad S and Q with a machine-level floor: garbage from the underflow
    // region must stay out of the global transforms below.
    VectorField grad_s = bohm_momentum_field(wf, eps_deep);
    ScalarField q0 = quantum_potential(wf, eps_deep);

    auto lap_psi = diffops::laplacian(g, wf.psi);
    std::vector<cdouble> res(wf.size(), cdouble{});
    const double c_lap = -hbar * hbar / (2.0 * m);
    for (std::size_t i = 0; i < wf.size(); ++i)
        res[i] = c_lap * lap_psi[i] - q0.values[i] * wf.psi[i];

    for (int a = 0; a < g.dim; ++a) {
        std::vector<cdouble> g_psi(wf.size());
        for (std::size_t i = 0; i < wf.size(); ++i)
            g_psi[i] = grad_s.comp[a][i] * wf.psi[i];
        auto d_gpsi = diffops::derivative(g, g_psi, a);
        auto d_psi = diffops::derivative(g, wf.psi, a);
        const cdouble c_mid(0.0, hbar / (2.0 * m));
        for (std::size_t i = 0; i < wf.size(); ++i) {
            const double ga = grad_s.comp[a][i];
            res[i] += c_mid * (d_gpsi[i] + ga * d_psi[i]) +
                      (ga * ga / (2.0 * m)) * wf.psi[i];
        }
    }

    const Mask node = polar_decompose(wf).node_mask;
    KahanSum num, den;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (node[i]) continue;
        num.add(std::norm(res[i]));
        den.add(std::norm(wf.psi[i]));
    }
    if (!(den.value() > 0.0))
        throw DegenerateStateError("fermi_operator_residual: empty off-mask region");
    return std::sqrt(num.value() / den.value());
}

EnergyDecomposition energy_decomposition(const WaveField& wf, const ScalarField& v) {
    if (!v.grid.same_as(wf.grid))
        throw Error("energy_decomposition: potential grid mismatch");
    EnergyDecomposition out;
    VectorField grad_s = bohm_momentum_field(wf);
    out.kinetic = ScalarField(wf.grid);
    out.kinetic.mask = grad_s.mask;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (out.kinetic.masked(i)) continue;
        double k2 = 0.0;
        for (int a = 0; a < wf.grid.dim; ++a)
            k2 += grad_s.comp[a][i] * grad_s.comp[a][i];
        out.kinetic.values[i] = k2 / (2.0 * wf.params.mass);
    }
    out.quantum = quantum_potential(wf);
    out.potential = v;
    out.total = ScalarField(wf.grid);
    out.total.mask = out.quantum.mask;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (out.total.masked(i)) continue;
        out.total.values[i] =
            out.kinetic.values[i] + out.quantum.values[i] + v.values[i];
    }
    return out;
}

namespace {
void require_real_up_to_phase(const WaveField& wf, const char* who) {
    VectorField grad_s = bohm_momentum_field(wf);
    double max_g = 0.0;
    for (int a = 0; a < wf.grid.dim; ++a)
        for (std::size_t i = 0; i < wf.size(); ++i)
            if (!grad_s.masked(i)) max_g = std::max(max_g, std::abs(grad_s.comp[a][i]));
    if (max_g >= 1e-8)
        throw PreconditionError(std::string(who) +
                                ": state is not real up to a constant phase");
}
} // namespace

double stationary_identity_check(const WaveField& wf, const ScalarField& v, double e) {
    if (!v.grid.same_as(wf.grid))
        throw Error("stationary_identity_check: potential grid mismatch");
    require_real_up_to_phase(wf, "stationary_identity_check");
    ScalarField q = quantum_potential(wf);
    const Grid& g = wf.grid;

    // Cells within 3 of an amplitude sign flip are excluded: the kink of
    // |psi| at an interior node corrupts the finite-difference Laplacian
    // there without the amplitude dropping below the node threshold.
    Mask bad(g.size(), 0);
    for (int a = 0; a < g.dim; ++a) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto c = g.unindex(i);
            if (c[a] + 1 >= g.n[a]) continue;
            auto cn = c;
            ++cn[a];
            const std::size_t j = g.index(cn[0], cn[1], cn[2]);
            if (std::real(std::conj(wf.psi[i]) * wf.psi[j]) < 0.0)
                bad[i] = bad[j] = 1;
        }
    }
    for (int pass = 0; pass < 3; ++pass) {
        Mask next = bad;
        for (int a = 0; a < g.dim; ++a)
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (!bad[i]) continue;
                auto c = g.unindex(i);
                for (int side = -1; side <= 1; side += 2) {
                    auto cn = c;
                    cn[a] += side;
                    if (g.periodic) cn[a] = ((cn[a] % g.n[a]) + g.n[a]) % g.n[a];
                    if (cn[a] < 0 || cn[a] >= g.n[a]) continue;
                    next[g.index(cn[0], cn[1], cn[2])] = 1;
                }
            }
        bad = std::move(next);
    }

    double dev = 0.0;
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (q.masked(i) || bad[i] || !in_verification_interior(g, i)) continue;
        dev = std::max(dev, std::abs(v.values[i] + q.values[i] - e));
    }
    return dev;
}

VectorField force_balance_field(const WaveField& wf, const ScalarField& v) {
    if (!v.grid.same_as(wf.grid))
        throw Error("force_balance_field: potential grid mismatch");
    require_real_up_to_phase(wf, "force_balance_field");
    ScalarField q = quantum_potential(wf);
    VectorField fq = quantum_force(q);
    VectorField out(wf.grid);
    out.mask = fq.mask;
    for (int a = 0; a < wf.grid.dim; ++a) {
        Mask mv;
        auto dv = diffops::masked_derivative(wf.grid, v.values, v.mask, a, mv);
        for (std::size_t i = 0; i < wf.size(); ++i) {
            if (mv[i]) out.mask[i] = 1;
            out.comp[a][i] = fq.comp[a][i] - dv[i];
        }
    }
    for (int a = 0; a < wf.grid.dim; ++a)
        for (std::size_t i = 0; i < wf.size(); ++i)
            if (out.mask[i]) out.comp[a][i] = 0.0;
    return out;
}

QuadraticForm fermi_set_quadratic(const StateSpec& spec) {
    spec.validate();
    const double m = spec.params.mass;
    const double w = spec.omega;
    if (spec.kind == StateKind::Coherent3d ||
        (spec.kind == StateKind::Oscillator1d && spec.n == 0)) {
        const int n = (spec.kind == StateKind::Coherent3d) ? 3 : 1;
        QuadraticForm q;
        q.n = n;
        q.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (int a = 0; a < n; ++a) {
            q.A(a, a) = m * w * w;
            q.A(n + a, n + a) = 1.0 / m;
        }
        q.E = exact_energy(spec);
        q.validate();
        return q;
    }
    throw NoClosedFormError("fermi_set_quadratic: no closed form for " +
                            spec.kind_name());
}

} // namespace qps
