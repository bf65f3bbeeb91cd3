#include "lipnav/constraints.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lipnav::constraints {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string tag(const char* base, int k) { return std::string(base) + "[" + std::to_string(k) + "]"; }

}  // namespace

void KinematicLimits::validate() const {
    if (!(v_x_min < v_x_max)) {
        throw std::invalid_argument("kinematic limits: require v_x_min < v_x_max");
    }
    if (!(0.0 < v_y_min && v_y_min < v_y_max)) {
        throw std::invalid_argument("kinematic limits: require 0 < v_y_min < v_y_max");
    }
    if (!(l_max > 0.0)) {
        throw std::invalid_argument("kinematic limits: require l_max > 0");
    }
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("kinematic limits: require alpha >= 0");
    }
}

std::vector<LinearRow> velocity_rows(const heading::HeadingSchedule& schedule, Foot stance0,
                                     const KinematicLimits& limits,
                                     const condensing::AffineStateMap& map) {
    limits.validate();
    std::vector<LinearRow> rows;
    rows.reserve(2 * static_cast<std::size_t>(map.n_steps));
    for (int k = 0; k < map.n_steps; ++k) {
        const double theta = schedule.heading_at(k);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double s_v = stance_at(stance0, k) == Foot::Right ? 1.0 : -1.0;

        const Eigen::MatrixXd vc = map.velocity_coeffs(k + 1);
        const Eigen::Vector2d vo = map.velocity_offset(k + 1);

        LinearRow lon;
        lon.coeffs = c * vc.row(0) + s * vc.row(1);
        const double lon_off = c * vo(0) + s * vo(1);
        lon.lower = limits.v_x_min - lon_off;
        lon.upper = limits.v_x_max - lon_off;
        lon.label = tag("vel_lon", k);
        rows.push_back(std::move(lon));

        LinearRow lat;
        lat.coeffs = s_v * (-s * vc.row(0) + c * vc.row(1));
        const double lat_off = s_v * (-s * vo(0) + c * vo(1));
        lat.lower = limits.v_y_min - lat_off;
        lat.upper = limits.v_y_max - lat_off;
        lat.label = tag("vel_lat", k);
        rows.push_back(std::move(lat));
    }
    return rows;
}

std::vector<LinearRow> reachability_rows(const heading::HeadingSchedule& schedule,
                                         const KinematicLimits& limits,
                                         const condensing::AffineStateMap& map) {
    limits.validate();
    const int dim = map.decision_dim();
    std::vector<LinearRow> rows;
    rows.reserve(2 * static_cast<std::size_t>(map.n_steps));
    for (int k = 0; k < map.n_steps; ++k) {
        const double theta = schedule.heading_at(k);
        const double c = std::cos(theta);
        const double s = std::sin(theta);

        // Displacement f_k - p(k): the footstep selector minus the CoM map.
        Eigen::MatrixXd dc = -map.position_coeffs(k);
        dc(0, 2 * k) += 1.0;
        dc(1, 2 * k + 1) += 1.0;
        const Eigen::Vector2d doff = -map.position_offset(k);

        LinearRow lon;
        lon.coeffs = Eigen::VectorXd::Zero(dim);
        lon.coeffs = c * dc.row(0) + s * dc.row(1);
        const double lon_off = c * doff(0) + s * doff(1);
        lon.lower = -limits.l_max - lon_off;
        lon.upper = limits.l_max - lon_off;
        lon.label = tag("reach_lon", k);
        rows.push_back(std::move(lon));

        LinearRow lat;
        lat.coeffs = -s * dc.row(0) + c * dc.row(1);
        const double lat_off = -s * doff(0) + c * doff(1);
        lat.lower = -limits.l_max - lat_off;
        lat.upper = limits.l_max - lat_off;
        lat.label = tag("reach_lat", k);
        rows.push_back(std::move(lat));
    }
    return rows;
}

std::vector<LinearRow> maneuverability_rows(const heading::HeadingSchedule& schedule,
                                            const KinematicLimits& limits,
                                            const condensing::AffineStateMap& map) {
    limits.validate();
    std::vector<LinearRow> rows;
    rows.reserve(static_cast<std::size_t>(map.n_steps));
    for (int k = 1; k <= map.n_steps; ++k) {
        const double theta = schedule.heading_at(k);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double rate = schedule.rates[static_cast<std::size_t>(k - 1)];

        const Eigen::MatrixXd vc = map.velocity_coeffs(k);
        const Eigen::Vector2d vo = map.velocity_offset(k);

        LinearRow row;
        row.coeffs = c * vc.row(0) + s * vc.row(1);
        const double off = c * vo(0) + s * vo(1);
        row.lower = -kInf;
        row.upper = limits.v_x_max - (limits.alpha / std::numbers::pi) * std::abs(rate) - off;
        row.label = tag("mnv", k);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lipnav::constraints
