// Static SVG rendering of one episode: obstacles (raw filled, inflated
// dashed), the CoM track, committed footsteps colored by stance, the
// sub-goal path when present, and goal/violation markers.

#pragma once

#include <string>

#include "lipnav/simulator.hpp"

namespace lipnav::io {

std::string render_svg(const sim::World& world, const sim::EpisodeLog& log,
                       double goal_tolerance = 0.3);

void write_svg(const std::string& path, const sim::World& world, const sim::EpisodeLog& log,
               double goal_tolerance = 0.3);

}  // namespace lipnav::io
