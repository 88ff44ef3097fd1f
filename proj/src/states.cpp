#include "qps/states.hpp"

#include <cmath>
#include <numbers>

namespace qps {

namespace {
constexpr double kPi = std::numbers::pi;

double hermite_phys(int n, double x) {
    double h0 = 1.0;
    if (n == 0) return h0;
    double h1 = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// Mass of a normalized Gaussian of std sigma outside [lo, hi].
double gaussian_tail_mass(double center, double sigma, double lo, double hi) {
    auto cdf = [&](double x) {
        return 0.5 * std::erfc(-(x - center) / (sigma * std::numbers::sqrt2));
    };
    return cdf(lo) + (1.0 - cdf(hi));
}
} // namespace

void StateSpec::validate() const {
    params.validate();
    switch (kind) {
        case StateKind::Coherent3d:
        case StateKind::Oscillator1d:
            if (!(omega > 0.0)) throw Error("StateSpec: omega must be positive");
            if (n < 0) throw Error("StateSpec: oscillator n must be >= 0");
            break;
        case StateKind::Well1d:
            if (n < 1) throw Error("StateSpec: well n must be >= 1");
            if (!(L > 0.0)) throw Error("StateSpec: well L must be positive");
            break;
        case StateKind::GaussianPacket:
        case StateKind::PlaneModulated:
            if (!(sigma > 0.0)) throw Error("StateSpec: sigma must be positive");
            break;
    }
}

bool StateSpec::is_eigenstate() const {
    return kind == StateKind::Coherent3d || kind == StateKind::Oscillator1d ||
           kind == StateKind::Well1d;
}

std::string StateSpec::kind_name() const {
    switch (kind) {
        case StateKind::Coherent3d: return "coherent3d";
        case StateKind::Oscillator1d: return "oscillator1d";
        case StateKind::Well1d: return "well1d";
        case StateKind::GaussianPacket: return "gaussian_packet";
        case StateKind::PlaneModulated: return "plane_modulated";
    }
    return "?";
}

WaveField realize(const StateSpec& spec, const Grid& grid) {
    spec.validate();
    const double hbar = spec.params.hbar;
    const double m = spec.params.mass;
    WaveField wf(grid, spec.params);

    switch (spec.kind) {
        case StateKind::Coherent3d: {
            if (grid.dim != 3) throw Error("realize: coherent3d needs a 3D grid");
            const double a = m * spec.omega / (2.0 * hbar);
            const double sig = std::sqrt(hbar / (2.0 * m * spec.omega)); // density std
            for (int k = 0; k < 3; ++k) {
                if (gaussian_tail_mass(0.0, sig, grid.lower[k], grid.upper[k]) > 1e-10)
                    throw Error("realize: grid truncates coherent3d mass above 1e-10");
            }
            for (std::size_t i = 0; i < wf.size(); ++i) {
                const auto r = grid.point(i);
                const double r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
                wf.psi[i] = std::exp(-a * r2);
            }
            break;
        }
        case StateKind::Oscillator1d: {
            if (grid.dim != 1) throw Error("realize: oscillator1d needs a 1D grid");
            const double xi_scale = std::sqrt(m * spec.omega / hbar);
            const double sig_n = std::sqrt((spec.n + 0.5) * hbar / (m * spec.omega));
            if (gaussian_tail_mass(0.0, sig_n, grid.lower[0], grid.upper[0]) > 1e-10)
                throw Error("realize: grid truncates oscillator1d mass above 1e-10");
            for (std::size_t i = 0; i < wf.size(); ++i) {
                const double xi = xi_scale * grid.coord(0, static_cast<int>(i));
                wf.psi[i] = hermite_phys(spec.n, xi) * std::exp(-0.5 * xi * xi);
            }
            break;
        }
        case StateKind::Well1d: {
            if (grid.dim != 1 || grid.periodic)
                throw Error("realize: well1d needs a 1D non-periodic grid");
            if (std::abs(grid.lower[0]) > 1e-12 || std::abs(grid.upper[0] - spec.L) > 1e-12)
                throw Error("realize: well1d grid must be exactly (0, L)");
            for (int i = 0; i < grid.n[0]; ++i) {
                const double x = grid.coord(0, i);
                wf.psi[static_cast<std::size_t>(i)] =
                    std::sin(spec.n * kPi * x / spec.L);
            }
            // hard walls
            wf.psi.front() = 0.0;
            wf.psi.back() = 0.0;
            break;
        }
        case StateKind::GaussianPacket:
        case StateKind::PlaneModulated: {
            if (grid.dim != 1) throw Error("realize: packet kinds need a 1D grid");
            const double x0 = (spec.kind == StateKind::GaussianPacket) ? spec.x0 : 0.0;
            if (gaussian_tail_mass(x0, spec.sigma, grid.lower[0], grid.upper[0]) > 1e-10)
                throw Error("realize: grid truncates packet mass above 1e-10");
            const double s2 = spec.sigma * spec.sigma;
            for (int i = 0; i < grid.n[0]; ++i) {
                const double x = grid.coord(0, i);
                const double env = std::exp(-(x - x0) * (x - x0) / (4.0 * s2));
                const double ph = spec.p0 * x / hbar;
                wf.psi[static_cast<std::size_t>(i)] =
                    env * cdouble(std::cos(ph), std::sin(ph));
            }
            break;
        }
    }
    return wf.normalized();
}

double exact_energy(const StateSpec& spec) {
    spec.validate();
    const double hbar = spec.params.hbar;
    const double m = spec.params.mass;
    switch (spec.kind) {
        case StateKind::Coherent3d:
            return 1.5 * spec.omega * hbar;
        case StateKind::Oscillator1d:
            return (spec.n + 0.5) * spec.omega * hbar;
        case StateKind::Well1d:
            return hbar * hbar * spec.n * spec.n * kPi * kPi / (2.0 * m * spec.L * spec.L);
        default:
            throw NotAnEigenstateError("exact_energy: " + spec.kind_name() +
                                       " is not an energy eigenstate");
    }
}

std::function<ScalarField(const Grid&)> exact_potential(const StateSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case StateKind::Coherent3d:
        case StateKind::Oscillator1d: {
            const double c = 0.5 * spec.params.mass * spec.omega * spec.omega;
            return [c](const Grid& g) {
                ScalarField v(g);
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const auto r = g.point(i);
                    double r2 = 0.0;
                    for (int k = 0; k < g.dim; ++k) r2 += r[k] * r[k];
                    v.values[i] = c * r2;
                }
                return v;
            };
        }
        case StateKind::Well1d:
            return [](const Grid& g) { return ScalarField(g, 0.0); };
        default:
            throw NoClosedFormError("exact_potential: no potential for " +
                                    spec.kind_name());
    }
}

Grid default_grid(const StateSpec& spec, int npts) {
    spec.validate();
    switch (spec.kind) {
        case StateKind::Coherent3d: {
            const double sig_amp = std::sqrt(spec.params.hbar / (spec.params.mass * spec.omega));
            return Grid::cube(3, npts, 8.0 * sig_amp, true);
        }
        case StateKind::Oscillator1d: {
            const double sig_amp = std::sqrt(spec.params.hbar / (spec.params.mass * spec.omega));
            return Grid::cube(1, npts, (8.0 + 2.0 * spec.n) * sig_amp, true);
        }
        case StateKind::Well1d:
            return Grid::make(1, {std::max(npts, 512), 1, 1}, {0.0, 0.0, 0.0},
                              {spec.L, 0.0, 0.0}, false);
        case StateKind::GaussianPacket:
        case StateKind::PlaneModulated: {
            // amplitude std is sqrt(2)*sigma (Delta x = sigma refers to
            // the density), so 8 amplitude sigmas is 8*sqrt(2) widths
            const double w = 8.0 * std::numbers::sqrt2 * spec.sigma;
            const double half = std::max(w, std::abs(spec.x0) + w);
            return Grid::make(1, {npts, 1, 1}, {spec.x0 - half, 0.0, 0.0},
                              {spec.x0 + half, 0.0, 0.0}, true);
        }
    }
    throw Error("default_grid: unknown kind");
}

} // namespace qps
