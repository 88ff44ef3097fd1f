#ifndef QPS_IO_HPP
#define QPS_IO_HPP

#include <filesystem>
#include <string>

#include "json.hpp" // vendored single-header nlohmann/json

#include "qps/dynamics.hpp"
#include "qps/field.hpp"
#include "qps/states.hpp"

namespace qps::io {

using json = nlohmann::json;

// Deterministic float formatting used by every CSV artifact: shortest
// round-trip representation, fixed across runs and platforms.
std::string format_double(double x);

// CSV artifacts. Every file starts with a header row; coordinates come
// first, then values, then the mask flag where the field carries one.
void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f);
void write_vector_csv(const std::filesystem::path& path, const VectorField& f);
void write_trajectories_csv(const std::filesystem::path& path,
                            const TrajectoryEnsemble& ens);

// Self-describing binary frame container (magic, version, grid header,
// physics, interleaved re/im doubles). Round-trips bit-exactly.
void write_wavefield(const std::filesystem::path& path, const WaveField& wf);
WaveField read_wavefield(const std::filesystem::path& path);

// Timeseries persistence: one frame container per recorded time plus a
// manifest.json listing times and file names.
void write_timeseries(const std::filesystem::path& dir, const Timeseries& ts);
Timeseries read_timeseries(const std::filesystem::path& dir);

// JSON <-> domain types. Parsers throw qps::Error with the offending key
// in the message.
json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);
json state_spec_to_json(const StateSpec& s);
StateSpec state_spec_from_json(const json& j, const PhysicsParams& params);
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

} // namespace qps::io

#endif
