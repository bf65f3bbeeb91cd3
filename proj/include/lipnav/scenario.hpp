// Scenario configuration and world files. Configs are JSON with fixed
// schemas: unknown keys are rejected with their full field path, every
// field has a default matching the reference tuning, and serialization
// emits floats at 17 significant digits so files replay bit-exactly.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipnav/geometry.hpp"
#include "lipnav/mpc.hpp"
#include "lipnav/rrt.hpp"
#include "lipnav/simulator.hpp"

namespace lipnav::io {

/// Schema or value problem; the message starts with the field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem problem; the message includes the path.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    sim::Mode mode = sim::Mode::GlobalGoal;

    // World source, first match wins: explicit file, inline obstacle
    // vertex lists, else seeded generation.
    std::string world_file;
    std::vector<std::vector<geom::Point2>> inline_obstacles;  // CCW vertex lists
    std::uint64_t world_seed = 1;
    sim::GenParams gen;

    mpc::MpcParams mpc;
    rrt::RrtParams rrt;
    sim::RunParams run;

    std::string log_path = "episode.ndjson";
    std::string svg_path;  // empty = no plot
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

/// Materialize the world a config describes (load, build inline, or
/// generate). Validates the start/goal clearance invariant.
sim::World world_from_config(const ScenarioConfig& cfg);

std::string serialize_world(const sim::World& world);
sim::World parse_world(const std::string& text);
void write_world(const std::string& path, const sim::World& world);
sim::World load_world(const std::string& path);

/// Shared float formatting: shortest %.17g form, replayable bit-exactly.
std::string format_double(double v);

/// Whole-file helpers used by the CLI.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lipnav::io
