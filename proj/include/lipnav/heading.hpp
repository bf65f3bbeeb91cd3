#pragma once

#include <stdexcept>
#include <vector>

#include "lipnav/geometry.hpp"

namespace lipnav::heading {

struct AtGoal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed turning rates for the horizon and the headings they produce.
/// rates[k] drives step k; headings[k] is the heading after k+1 steps.
struct HeadingSchedule {
    double theta0 = 0.0;          // heading at the start of the horizon
    std::vector<double> rates;    // rad/s, |rate| <= omega_max
    std::vector<double> headings; // rad, wrapped to (-pi, pi]
    double omega_max = 0.0;

    double heading_at(std::size_t k) const {  // theta_k, k = 0..N
        return k == 0 ? theta0 : headings[k - 1];
    }
};

/// Direction from pos toward goal in (-pi, pi]. Throws AtGoal when the
/// two points coincide; the caller keeps its previous heading.
double target_heading(geom::Point2 pos, geom::Point2 goal);

/// Uniform turning rate toward the target heading: the shortest angular
/// difference spread over N steps, clamped to +-omega_max. A clamped
/// schedule under-turns within one horizon and completes over later
/// replans.
HeadingSchedule precompute_turning_rates(double theta0, double target, int n_steps,
                                         double step_duration, double omega_max);

}  // namespace lipnav::heading
