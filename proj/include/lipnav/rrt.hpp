// Global path planning with a rapidly-exploring random tree, plus the
// lookahead rule that feeds its waypoints to the footstep planner as
// sub-goals. Fully deterministic for a given seed.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lipnav/geometry.hpp"

namespace lipnav::rrt {

struct NoPathFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RrtParams {
    double step_size = 0.5;      // m, tree extension length
    double goal_bias = 0.1;      // probability of sampling the goal
    int max_nodes = 5000;        // tree size budget
    double goal_tolerance = 0.3; // m, connect-to-goal radius
    std::uint64_t seed = 1;
    double inflation = 0.35;     // m, obstacle inflation for collision checks

    /// Throws std::invalid_argument on a broken field.
    void validate() const;
};

/// Ordered waypoints from start to goal; consecutive segments are
/// collision-free against the inflated obstacles.
struct Waypath {
    std::vector<geom::Point2> waypoints;
};

/// Grow a tree from start until it connects to goal, then backtrack and
/// shortcut-smooth. Obstacles are inflated by params.inflation before any
/// collision check. Throws NoPathFound when either endpoint is inside an
/// inflated obstacle or the node budget runs out.
Waypath plan_path(const std::vector<geom::ConvexPolygon>& obstacles, const geom::Rect& bounds,
                  geom::Point2 start, geom::Point2 goal, const RrtParams& params);

/// Sub-goal selection: starting at cursor, skip waypoints within lookahead
/// of robot_pos and return the first one beyond it, or the final waypoint
/// once all others are consumed. cursor advances monotonically and is
/// never rewound. Throws std::invalid_argument for an empty path.
geom::Point2 next_subgoal(const Waypath& path, geom::Point2 robot_pos, double lookahead,
                          std::size_t& cursor);

/// Stateless variant scanning from the first waypoint.
geom::Point2 next_subgoal(const Waypath& path, geom::Point2 robot_pos, double lookahead);

}  // namespace lipnav::rrt
