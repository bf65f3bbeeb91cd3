#include "lipnav/rrt.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lipnav/rng.hpp"

namespace lipnav::rrt {

namespace {

using rng::canonical;

bool segment_free(geom::Point2 a, geom::Point2 b, const std::vector<geom::ConvexPolygon>& obstacles) {
    for (const geom::ConvexPolygon& poly : obstacles) {
        if (geom::segment_intersects_polygon(a, b, poly)) {
            return false;
        }
    }
    return true;
}

bool point_free(geom::Point2 p, const std::vector<geom::ConvexPolygon>& obstacles) {
    for (const geom::ConvexPolygon& poly : obstacles) {
        if (geom::point_in_polygon(poly, p)) {
            return false;
        }
    }
    return true;
}

std::vector<geom::Point2> shortcut(const std::vector<geom::Point2>& path,
                                   const std::vector<geom::ConvexPolygon>& obstacles) {
    std::vector<geom::Point2> out;
    out.push_back(path.front());
    std::size_t i = 0;
    while (i + 1 < path.size()) {
        std::size_t j = path.size() - 1;
        while (j > i + 1 && !segment_free(path[i], path[j], obstacles)) {
            --j;
        }
        out.push_back(path[j]);
        i = j;
    }
    return out;
}

}  // namespace

void RrtParams::validate() const {
    if (!(step_size > 0.0)) {
        throw std::invalid_argument("rrt params: require step_size > 0");
    }
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) {
        throw std::invalid_argument("rrt params: require goal_bias in [0, 1]");
    }
    if (max_nodes < 1) {
        throw std::invalid_argument("rrt params: require max_nodes >= 1");
    }
    if (!(goal_tolerance >= 0.0)) {
        throw std::invalid_argument("rrt params: require goal_tolerance >= 0");
    }
    if (!(inflation >= 0.0)) {
        throw std::invalid_argument("rrt params: require inflation >= 0");
    }
}

Waypath plan_path(const std::vector<geom::ConvexPolygon>& obstacles, const geom::Rect& bounds,
                  geom::Point2 start, geom::Point2 goal, const RrtParams& params) {
    params.validate();
    if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
        throw std::invalid_argument("rrt: degenerate workspace bounds");
    }

    std::vector<geom::ConvexPolygon> inflated;
    inflated.reserve(obstacles.size());
    for (const geom::ConvexPolygon& poly : obstacles) {
        inflated.push_back(params.inflation > 0.0 ? geom::inflate(poly, params.inflation) : poly);
    }

    if (!point_free(start, inflated)) {
        throw NoPathFound("rrt: start lies inside an inflated obstacle");
    }
    if (!point_free(goal, inflated)) {
        throw NoPathFound("rrt: goal lies inside an inflated obstacle");
    }
    if (segment_free(start, goal, inflated)) {
        return Waypath{{start, goal}};
    }

    std::mt19937_64 rng(params.seed);
    std::vector<geom::Point2> nodes{start};
    std::vector<int> parent{-1};
    nodes.reserve(static_cast<std::size_t>(params.max_nodes));

    // Rejected samples do not grow the tree; cap attempts so a walled-in
    // start still terminates.
    const long attempt_budget = 100L * params.max_nodes;
    for (long attempt = 0; attempt < attempt_budget; ++attempt) {
        if (static_cast<int>(nodes.size()) >= params.max_nodes) {
            break;
        }
        geom::Point2 sample;
        if (canonical(rng) < params.goal_bias) {
            sample = goal;
        } else {
            sample = {bounds.x_min + canonical(rng) * bounds.width(),
                      bounds.y_min + canonical(rng) * bounds.height()};
        }

        std::size_t nearest = 0;
        double best = geom::distance(nodes[0], sample);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double d = geom::distance(nodes[i], sample);
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        if (best < 1e-12) {
            continue;  // sample coincides with an existing node
        }

        const double reach = std::min(params.step_size, best);
        const geom::Point2 dir = (1.0 / best) * (sample - nodes[nearest]);
        const geom::Point2 candidate = nodes[nearest] + reach * dir;
        if (!bounds.contains(candidate) || !segment_free(nodes[nearest], candidate, inflated)) {
            continue;
        }
        nodes.push_back(candidate);
        parent.push_back(static_cast<int>(nearest));

        if (geom::distance(candidate, goal) <= params.goal_tolerance &&
            segment_free(candidate, goal, inflated)) {
            std::vector<geom::Point2> raw{goal};
            for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; i = parent[static_cast<std::size_t>(i)]) {
                raw.push_back(nodes[static_cast<std::size_t>(i)]);
            }
            std::reverse(raw.begin(), raw.end());
            return Waypath{shortcut(raw, inflated)};
        }
    }
    throw NoPathFound("rrt: node budget exhausted without reaching the goal");
}

geom::Point2 next_subgoal(const Waypath& path, geom::Point2 robot_pos, double lookahead,
                          std::size_t& cursor) {
    if (path.waypoints.empty()) {
        throw std::invalid_argument("next_subgoal: empty path");
    }
    const std::size_t last = path.waypoints.size() - 1;
    if (cursor > last) {
        cursor = last;
    }
    while (cursor < last && geom::distance(path.waypoints[cursor], robot_pos) <= lookahead) {
        ++cursor;
    }
    return path.waypoints[cursor];
}

geom::Point2 next_subgoal(const Waypath& path, geom::Point2 robot_pos, double lookahead) {
    std::size_t cursor = 0;
    return next_subgoal(path, robot_pos, lookahead, cursor);
}

}  // namespace lipnav::rrt
