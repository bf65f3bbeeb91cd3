// Episode logs as NDJSON: one self-describing object per line, floats at
// 17 significant digits. A log embeds the world it was run against, so a
// log file alone is enough to replot or re-examine an episode. Step lines
// carry no wall-clock fields and are byte-stable across identical runs.

#pragma once

#include <string>

#include "lipnav/scenario.hpp"
#include "lipnav/simulator.hpp"

namespace lipnav::io {

struct LoadedEpisode {
    sim::World world;
    sim::EpisodeLog log;
};

/// One NDJSON line (with trailing newline) for a committed step record.
std::string step_line(const sim::StepRecord& rec);

std::string serialize_episode(const sim::World& world, const sim::EpisodeLog& log);
LoadedEpisode parse_episode(const std::string& text);

void write_episode(const std::string& path, const sim::World& world, const sim::EpisodeLog& log);
LoadedEpisode load_episode(const std::string& path);

}  // namespace lipnav::io
