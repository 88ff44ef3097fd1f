#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qps/io.hpp"
#include "qps/states.hpp"

using namespace qps;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "qps_io_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WaveField sample_field() {
    StateSpec s;
    s.kind = StateKind::GaussianPacket;
    s.p0 = 0.7;
    return realize(s, default_grid(s, 64));
}

} // namespace

TEST_CASE("format_double round-trips and is stable") {
    CHECK(io::format_double(0.1) == io::format_double(0.1));
    CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(std::stod(io::format_double(1e-300)) == 1e-300);
}

TEST_CASE("wavefield binary container round-trips bit-exactly") {
    const fs::path path = temp_dir() / "frame.qpsf";
    const WaveField wf = sample_field();
    io::write_wavefield(path, wf);
    const WaveField back = io::read_wavefield(path);
    REQUIRE(back.grid.same_as(wf.grid));
    CHECK(back.params.hbar == wf.params.hbar);
    CHECK(back.params.mass == wf.params.mass);
    for (std::size_t i = 0; i < wf.size(); ++i)
        CHECK(back.psi[i] == wf.psi[i]); // exact, not approximate
}

TEST_CASE("corrupt containers are rejected") {
    const fs::path path = temp_dir() / "broken.qpsf";
    std::ofstream(path) << "definitely not a frame";
    CHECK_THROWS_AS(io::read_wavefield(path), Error);
}

TEST_CASE("timeseries directory round-trip") {
    const fs::path dir = temp_dir() / "ts";
    Timeseries ts;
    const WaveField wf = sample_field();
    for (int f = 0; f < 3; ++f) {
        ts.times.push_back(0.5 * f);
        ts.frames.push_back(wf);
    }
    io::write_timeseries(dir, ts);
    const Timeseries back = io::read_timeseries(dir);
    REQUIRE(back.frames.size() == 3);
    CHECK(back.times[2] == 1.0);
    CHECK(back.frames[1].psi == wf.psi);
}

TEST_CASE("grid and state JSON round-trip") {
    const Grid g = Grid::make(2, {16, 24, 1}, {-1.0, -2.0, 0}, {1.0, 2.0, 0}, false);
    const Grid g2 = io::grid_from_json(io::grid_to_json(g));
    CHECK(g2.same_as(g));

    StateSpec s;
    s.kind = StateKind::Well1d;
    s.n = 3;
    s.L = 2.0;
    const StateSpec s2 = io::state_spec_from_json(io::state_spec_to_json(s), s.params);
    CHECK(s2.kind == s.kind);
    CHECK(s2.n == 3);
    CHECK(s2.L == 2.0);
}

TEST_CASE("schema violations carry the offending key") {
    CHECK_THROWS_AS(io::grid_from_json(io::json{{"n", {8}}}), Error); // no bounds
    CHECK_THROWS_AS(io::state_spec_from_json(io::json{{"kind", "nonsense"}}, {}),
                    Error);
    CHECK_THROWS_AS(io::state_spec_from_json(io::json::array(), {}), Error);
}

TEST_CASE("CSV artifacts are deterministic and carry headers") {
    const fs::path a = temp_dir() / "a.csv";
    const fs::path b = temp_dir() / "b.csv";
    StateSpec s;
    s.kind = StateKind::Oscillator1d;
    const Grid g = default_grid(s, 64);
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        f.values[i] = std::sin(0.17 * static_cast<double>(i));
    io::write_scalar_csv(a, f);
    io::write_scalar_csv(b, f);
    const std::string sa = slurp(a);
    CHECK(sa == slurp(b));
    CHECK(sa.substr(0, 2) == "x,");
    // header plus one row per grid point
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 1 + static_cast<long>(g.size()));
}

TEST_CASE("malformed JSON reports the file") {
    const fs::path path = temp_dir() / "bad.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_WITH_AS(io::read_json(path),
                         doctest::Contains("bad.json"), Error);
}
