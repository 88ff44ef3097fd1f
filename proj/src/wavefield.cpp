#include "qps/wavefield.hpp"

#include <cmath>

#include "qps/diffops.hpp"

namespace qps {

double default_eps_node(const WaveField& wf) {
    return kDefaultEpsNodeRel * wf.max_abs();
}

namespace {

double resolve_eps(const WaveField& wf, double eps_node) {
    const double rmax = wf.max_abs();
    if (rmax == 0.0) throw DegenerateStateError("wavefunction is identically zero");
    return eps_node > 0.0 ? eps_node : kDefaultEpsNodeRel * rmax;
}

Mask node_mask(const WaveField& wf, double eps) {
    Mask m(wf.size(), 0);
    for (std::size_t i = 0; i < wf.size(); ++i)
        if (std::abs(wf.psi[i]) < eps) m[i] = 1;
    return m;
}

} // namespace

PolarField polar_decompose(const WaveField& wf, double eps_node) {
    if (!wf.all_finite()) throw Error("polar_decompose: non-finite wavefunction");
    const double eps = resolve_eps(wf, eps_node);
    PolarField pf;
    pf.grid = wf.grid;
    pf.params = wf.params;
    pf.R.resize(wf.size());
    pf.S.resize(wf.size());
    pf.node_mask.assign(wf.size(), 0);
    for (std::size_t i = 0; i < wf.size(); ++i) {
        pf.R[i] = std::abs(wf.psi[i]);
        pf.S[i] = wf.params.hbar * std::arg(wf.psi[i]);
        if (pf.R[i] < eps) pf.node_mask[i] = 1;
    }
    return pf;
}

ScalarField density(const WaveField& wf) {
    if (!wf.all_finite()) throw Error("density: non-finite wavefunction");
    ScalarField rho(wf.grid);
    for (std::size_t i = 0; i < wf.size(); ++i) rho.values[i] = std::norm(wf.psi[i]);
    return rho;
}

VectorField bohm_momentum_field(const WaveField& wf, double eps_node) {
    const double eps = resolve_eps(wf, eps_node);
    const double hbar = wf.params.hbar;
    VectorField out(wf.grid);
    out.mask = node_mask(wf, eps);
    const double floor2 = std::pow(kDeepFloorRel * wf.max_abs(), 2);
    for (int a = 0; a < wf.grid.dim; ++a) {
        auto dpsi = diffops::derivative(wf.grid, wf.psi, a);
        for (std::size_t i = 0; i < wf.size(); ++i) {
            if (out.mask[i]) continue;
            const double rho = std::norm(wf.psi[i]);
            const double imjs = std::imag(std::conj(wf.psi[i]) * dpsi[i]);
            out.comp[a][i] = hbar * imjs / std::max(rho, floor2);
        }
    }
    return out;
}

VectorField probability_current(const WaveField& wf) {
    const double scale = wf.params.hbar / wf.params.mass;
    VectorField out(wf.grid);
    for (int a = 0; a < wf.grid.dim; ++a) {
        auto dpsi = diffops::derivative(wf.grid, wf.psi, a);
        for (std::size_t i = 0; i < wf.size(); ++i)
            out.comp[a][i] = scale * std::imag(std::conj(wf.psi[i]) * dpsi[i]);
    }
    return out;
}

ScalarField quantum_potential(const WaveField& wf, double eps_node) {
    const double eps = resolve_eps(wf, eps_node);
    const double coef = -wf.params.hbar * wf.params.hbar / (2.0 * wf.params.mass);
    std::vector<double> R(wf.size());
    for (std::size_t i = 0; i < wf.size(); ++i) R[i] = std::abs(wf.psi[i]);
    auto lapR = diffops::laplacian(wf.grid, R);
    ScalarField q(wf.grid);
    q.mask = node_mask(wf, eps);
    const double floor = kDeepFloorRel * wf.max_abs();
    for (std::size_t i = 0; i < wf.size(); ++i) {
        if (q.mask[i]) continue;
        q.values[i] = coef * lapR[i] / std::max(R[i], floor);
    }
    return q;
}

VectorField quantum_force(const ScalarField& q) {
    VectorField f(q.grid);
    Mask combined(q.size(), 0);
    for (int a = 0; a < q.grid.dim; ++a) {
        Mask ma;
        auto d = diffops::masked_derivative(q.grid, q.values, q.mask, a, ma);
        for (std::size_t i = 0; i < q.size(); ++i) {
            f.comp[a][i] = -d[i];
            if (ma[i]) combined[i] = 1;
        }
    }
    f.mask = std::move(combined);
    // zero out all components at masked points
    for (int a = 0; a < q.grid.dim; ++a)
        for (std::size_t i = 0; i < q.size(); ++i)
            if (f.mask[i]) f.comp[a][i] = 0.0;
    return f;
}

CovarianceMatrix covariance_matrix(const WaveField& wf) {
    const double n2 = wf.norm_squared();
    if (std::abs(n2 - 1.0) > 1e-8)
        throw NormalizationError("covariance_matrix: wavefunction not normalized");
    const Grid& g = wf.grid;
    const int n = g.dim;
    const double dV = g.cell_volume();
    const double hbar = wf.params.hbar;

    // p_hat psi per axis
    std::vector<std::vector<cdouble>> ppsi(n);
    for (int a = 0; a < n; ++a) {
        auto d = diffops::derivative(g, wf.psi, a);
        for (auto& z : d) z *= cdouble(0.0, -hbar);
        ppsi[a] = std::move(d);
    }

    std::vector<double> mean_x(n, 0.0), mean_p(n, 0.0);
    for (int a = 0; a < n; ++a) {
        KahanSum sx, sp;
        for (std::size_t i = 0; i < wf.size(); ++i) {
            const auto r = g.point(i);
            sx.add(r[a] * std::norm(wf.psi[i]));
            sp.add(std::real(std::conj(wf.psi[i]) * ppsi[a][i]));
        }
        mean_x[a] = sx.value() * dV;
        mean_p[a] = sp.value() * dV;
    }

    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            KahanSum sxx, spp;
            for (std::size_t i = 0; i < wf.size(); ++i) {
                const auto r = g.point(i);
                sxx.add((r[a] - mean_x[a]) * (r[b] - mean_x[b]) * std::norm(wf.psi[i]));
                spp.add(std::real(std::conj(ppsi[a][i]) * ppsi[b][i]));
            }
            sigma(a, b) = sigma(b, a) = sxx.value() * dV;
            sigma(n + a, n + b) = sigma(n + b, n + a) =
                spp.value() * dV - mean_p[a] * mean_p[b];
        }
        for (int b = 0; b < n; ++b) {
            KahanSum sxp;
            for (std::size_t i = 0; i < wf.size(); ++i) {
                const auto r = g.point(i);
                sxp.add(r[a] * std::real(std::conj(wf.psi[i]) * ppsi[b][i]));
            }
            const double cov = sxp.value() * dV - mean_x[a] * mean_p[b];
            sigma(a, n + b) = cov;
            sigma(n + b, a) = cov;
        }
    }
    CovarianceMatrix out;
    out.sigma = std::move(sigma);
    out.n = n;
    out.validate(1e-9);
    return out;
}

} // namespace qps
