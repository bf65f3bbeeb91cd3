#include "lipnav/ldcbf.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace lipnav::ldcbf {

void BarrierParams::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("barrier params: require 0 < gamma <= 1");
    }
    if (!(active_radius > 0.0)) {
        throw std::invalid_argument("barrier params: require active_radius > 0");
    }
}

HalfSpace build_halfspace(const geom::ConvexPolygon& obstacle, geom::Point2 robot_pos,
                          int obstacle_id) {
    const geom::ClosestPointResult cp = geom::closest_point(obstacle, robot_pos);
    // On-boundary queries have no direction back to the robot; fall back to
    // the boundary's own outward normal.
    const geom::Point2 n = cp.distance <= geom::kGeomTol
                               ? geom::boundary_normal(obstacle, cp)
                               : geom::outward_normal(obstacle, cp, robot_pos);
    HalfSpace hs;
    hs.eta = Eigen::Vector2d(n.x, n.y);
    hs.c = cp.point;
    hs.source_obstacle = obstacle_id;
    return hs;
}

std::vector<int> active_obstacles(const std::vector<geom::ConvexPolygon>& world,
                                  geom::Point2 robot_pos, double radius) {
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(world.size()); ++i) {
        if (geom::boundary_distance(world[static_cast<std::size_t>(i)], robot_pos) <= radius) {
            ids.push_back(i);
        }
    }
    return ids;
}

std::vector<constraints::LinearRow> ldcbf_rows(const HalfSpace& hs, const BarrierParams& params,
                                               const condensing::AffineStateMap& map) {
    params.validate();
    const double eta_c = hs.eta(0) * hs.c.x + hs.eta(1) * hs.c.y;
    std::vector<constraints::LinearRow> rows;
    rows.reserve(static_cast<std::size_t>(map.n_steps));
    for (int k = 0; k < map.n_steps; ++k) {
        const Eigen::MatrixXd pc_next = map.position_coeffs(k + 1);
        const Eigen::MatrixXd pc_cur = map.position_coeffs(k);
        const Eigen::Vector2d po_next = map.position_offset(k + 1);
        const Eigen::Vector2d po_cur = map.position_offset(k);

        constraints::LinearRow row;
        row.coeffs = hs.eta.transpose() * pc_next + (params.gamma - 1.0) * hs.eta.transpose() * pc_cur;
        const double off = hs.eta.dot(po_next) + (params.gamma - 1.0) * hs.eta.dot(po_cur);
        row.lower = params.gamma * eta_c - off;
        row.upper = std::numeric_limits<double>::infinity();
        row.label = "dcbf[" + std::to_string(hs.source_obstacle) + "][" + std::to_string(k) + "]";
        rows.push_back(std::move(row));
    }
    return rows;
}

double h_value(const HalfSpace& hs, geom::Point2 pos) {
    return hs.eta(0) * (pos.x - hs.c.x) + hs.eta(1) * (pos.y - hs.c.y);
}

}  // namespace lipnav::ldcbf
