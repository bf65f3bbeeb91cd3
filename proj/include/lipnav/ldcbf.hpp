// Obstacle-avoidance rows built from discrete control barrier functions on
// half-spaces. For each obstacle near the robot we anchor a half-space at
// the closest boundary point; the barrier h(x) = eta . (x - c) then yields
// one linear row per horizon step that forbids h from decaying faster than
// a (1 - gamma) geometric envelope.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lipnav/condensing.hpp"
#include "lipnav/constraints.hpp"
#include "lipnav/geometry.hpp"

namespace lipnav::ldcbf {

/// Safe half-space { x : eta . (x - c) >= 0 } anchored on an obstacle
/// boundary. By convexity the obstacle lies entirely in the complement.
struct HalfSpace {
    Eigen::Vector2d eta;      ///< unit outward normal
    geom::Point2 c;           ///< anchor, closest obstacle-boundary point
    int source_obstacle = 0;  ///< world obstacle index
};

struct BarrierParams {
    double gamma = 0.3;          ///< decay rate, in (0, 1]
    double active_radius = 4.0;  ///< m, obstacles farther than this are ignored

    /// Throws std::invalid_argument when out of range.
    void validate() const;
};

/// Anchor a half-space on the obstacle boundary point closest to robot_pos.
/// robot_pos strictly inside the obstacle propagates QueryInsideObstacle;
/// a boundary query anchors at distance zero using the boundary normal.
HalfSpace build_halfspace(const geom::ConvexPolygon& obstacle, geom::Point2 robot_pos,
                          int obstacle_id = 0);

/// Indices of obstacles whose boundary is within radius of robot_pos,
/// in ascending index order.
std::vector<int> active_obstacles(const std::vector<geom::ConvexPolygon>& world,
                                  geom::Point2 robot_pos, double radius);

/// Barrier decay rows for one half-space, k = 0..N-1:
/// eta.p(k+1) + (gamma-1) eta.p(k) >= gamma eta.c, upper bound +inf.
std::vector<constraints::LinearRow> ldcbf_rows(const HalfSpace& hs, const BarrierParams& params,
                                               const condensing::AffineStateMap& map);

/// Signed distance eta . (pos - c); nonnegative on the safe side.
double h_value(const HalfSpace& hs, geom::Point2 pos);

}  // namespace lipnav::ldcbf
