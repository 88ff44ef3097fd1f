#include "qps/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace qps::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error("io: cannot open " + path.string() + " for writing");
    return out;
}

void write_coords_header(std::ofstream& out, int dim) {
    static const char* names[3] = {"x", "y", "z"};
    for (int a = 0; a < dim; ++a) out << names[a] << ',';
}

void write_coords(std::ofstream& out, const Grid& g, std::size_t i) {
    const auto r = g.point(i);
    for (int a = 0; a < g.dim; ++a) out << format_double(r[a]) << ',';
}

constexpr char kMagic[8] = {'Q', 'P', 'S', 'F', 'R', 'M', '0', '1'};

template <class T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw Error("io: truncated frame container");
    return v;
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    // %.17g round-trips every finite double and prints identically for
    // identical bit patterns.
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f) {
    auto out = open_out(path);
    write_coords_header(out, f.grid.dim);
    out << "value,masked\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        write_coords(out, f.grid, i);
        out << format_double(f.masked(i) ? 0.0 : f.values[i]) << ','
            << (f.masked(i) ? 1 : 0) << '\n';
    }
}

void write_vector_csv(const std::filesystem::path& path, const VectorField& f) {
    auto out = open_out(path);
    static const char* names[3] = {"vx", "vy", "vz"};
    write_coords_header(out, f.grid.dim);
    for (int a = 0; a < f.grid.dim; ++a) out << names[a] << ',';
    out << "masked\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        write_coords(out, f.grid, i);
        for (int a = 0; a < f.grid.dim; ++a)
            out << format_double(f.masked(i) ? 0.0 : f.comp[a][i]) << ',';
        out << (f.masked(i) ? 1 : 0) << '\n';
    }
}

void write_trajectories_csv(const std::filesystem::path& path,
                            const TrajectoryEnsemble& ens) {
    auto out = open_out(path);
    out << "path,t,x,y,z,status,seed_snapped\n";
    for (std::size_t p = 0; p < ens.paths.size(); ++p) {
        const Trajectory& tr = ens.paths[p];
        const char* status = tr.status == Trajectory::Status::Ok ? "ok"
                             : tr.status == Trajectory::Status::Exited
                                 ? "exited"
                                 : "node_collision";
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            out << p << ',' << format_double(tr.times[k]);
            for (int a = 0; a < 3; ++a) out << ',' << format_double(tr.pos[k][a]);
            out << ',' << status << ',' << (tr.seed_snapped ? 1 : 0) << '\n';
        }
    }
}

void write_wavefield(const std::filesystem::path& path, const WaveField& wf) {
    auto out = open_out(path, /*binary=*/true);
    out.write(kMagic, sizeof(kMagic));
    put<std::int32_t>(out, wf.grid.dim);
    put<std::int32_t>(out, wf.grid.periodic ? 1 : 0);
    for (int a = 0; a < 3; ++a) put<std::int32_t>(out, wf.grid.n[a]);
    for (int a = 0; a < 3; ++a) put<double>(out, wf.grid.lower[a]);
    for (int a = 0; a < 3; ++a) put<double>(out, wf.grid.upper[a]);
    put<double>(out, wf.params.hbar);
    put<double>(out, wf.params.mass);
    put<std::uint64_t>(out, wf.psi.size());
    out.write(reinterpret_cast<const char*>(wf.psi.data()),
              static_cast<std::streamsize>(wf.psi.size() * sizeof(cdouble)));
    if (!out) throw Error("io: write failed for " + path.string());
}

WaveField read_wavefield(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io: cannot open " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw Error("io: " + path.string() + " is not a frame container");
    Grid g;
    g.dim = get<std::int32_t>(in);
    g.periodic = get<std::int32_t>(in) != 0;
    for (int a = 0; a < 3; ++a) g.n[a] = get<std::int32_t>(in);
    for (int a = 0; a < 3; ++a) g.lower[a] = get<double>(in);
    for (int a = 0; a < 3; ++a) g.upper[a] = get<double>(in);
    WaveField wf;
    wf.params.hbar = get<double>(in);
    wf.params.mass = get<double>(in);
    g.validate();
    wf.grid = g;
    const auto count = get<std::uint64_t>(in);
    if (count != g.size()) throw Error("io: frame size does not match grid");
    wf.psi.resize(count);
    in.read(reinterpret_cast<char*>(wf.psi.data()),
            static_cast<std::streamsize>(count * sizeof(cdouble)));
    if (!in) throw Error("io: truncated frame container");
    return wf;
}

void write_timeseries(const std::filesystem::path& dir, const Timeseries& ts) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["format"] = "qps-timeseries";
    manifest["version"] = 1;
    manifest["frames"] = json::array();
    for (std::size_t f = 0; f < ts.frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05zu.qpsf", f);
        write_wavefield(dir / name, ts.frames[f]);
        manifest["frames"].push_back({{"t", ts.times[f]}, {"file", name}});
    }
    write_json(dir / "manifest.json", manifest);
}

Timeseries read_timeseries(const std::filesystem::path& dir) {
    const json manifest = read_json(dir / "manifest.json");
    if (manifest.value("format", "") != "qps-timeseries")
        throw Error("io: " + dir.string() + " is not a timeseries directory");
    Timeseries ts;
    for (const auto& fr : manifest.at("frames")) {
        ts.times.push_back(fr.at("t").get<double>());
        ts.frames.push_back(read_wavefield(dir / fr.at("file").get<std::string>()));
    }
    return ts;
}

json grid_to_json(const Grid& g) {
    json j;
    j["periodic"] = g.periodic;
    j["n"] = json::array();
    j["lower"] = json::array();
    j["upper"] = json::array();
    for (int a = 0; a < g.dim; ++a) {
        j["n"].push_back(g.n[a]);
        j["lower"].push_back(g.lower[a]);
        j["upper"].push_back(g.upper[a]);
    }
    return j;
}

Grid grid_from_json(const json& j) {
    if (!j.is_object()) throw Error("grid: expected an object");
    Grid g;
    try {
        const auto& n = j.at("n");
        g.dim = static_cast<int>(n.size());
        if (g.dim < 1 || g.dim > 3) throw Error("grid: n must have 1-3 entries");
        for (int a = 0; a < g.dim; ++a) {
            g.n[a] = n.at(a).get<int>();
            g.lower[a] = j.at("lower").at(a).get<double>();
            g.upper[a] = j.at("upper").at(a).get<double>();
        }
        g.periodic = j.value("periodic", true);
    } catch (const json::exception& e) {
        throw Error(std::string("grid: ") + e.what());
    }
    g.validate();
    return g;
}

json state_spec_to_json(const StateSpec& s) {
    json j;
    j["kind"] = s.kind_name();
    switch (s.kind) {
        case StateKind::Coherent3d:
            j["omega"] = s.omega;
            break;
        case StateKind::Oscillator1d:
            j["omega"] = s.omega;
            j["n"] = s.n;
            break;
        case StateKind::Well1d:
            j["n"] = s.n;
            j["L"] = s.L;
            break;
        case StateKind::GaussianPacket:
        case StateKind::PlaneModulated:
            j["x0"] = s.x0;
            j["p0"] = s.p0;
            j["sigma"] = s.sigma;
            break;
    }
    return j;
}

StateSpec state_spec_from_json(const json& j, const PhysicsParams& params) {
    if (!j.is_object()) throw Error("state: expected an object");
    StateSpec s;
    s.params = params;
    std::string kind;
    try {
        kind = j.at("kind").get<std::string>();
        if (kind == "coherent3d") {
            s.kind = StateKind::Coherent3d;
        } else if (kind == "oscillator1d") {
            s.kind = StateKind::Oscillator1d;
            s.n = j.value("n", 0);
        } else if (kind == "well1d") {
            s.kind = StateKind::Well1d;
            s.n = j.value("n", 1);
            s.L = j.value("L", 1.0);
        } else if (kind == "gaussian_packet" || kind == "plane_modulated") {
            s.kind = kind == "gaussian_packet" ? StateKind::GaussianPacket
                                               : StateKind::PlaneModulated;
            s.x0 = j.value("x0", 0.0);
            s.p0 = j.value("p0", 0.0);
            s.sigma = j.value("sigma", 1.0);
        } else {
            throw Error("state: unknown kind '" + kind + "'");
        }
        s.omega = j.value("omega", 1.0);
    } catch (const json::exception& e) {
        throw Error(std::string("state: ") + e.what());
    }
    s.validate();
    return s;
}

void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io: cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

} // namespace qps::io
