#include "lipnav/heading.hpp"

#include <algorithm>
#include <cmath>

#include "lipnav/lip_model.hpp"

namespace lipnav::heading {

double target_heading(geom::Point2 pos, geom::Point2 goal) {
    if (geom::distance(pos, goal) <= geom::kGeomTol) {
        throw AtGoal("position coincides with the goal");
    }
    return std::atan2(goal.y - pos.y, goal.x - pos.x);
}

HeadingSchedule precompute_turning_rates(double theta0, double target, int n_steps,
                                         double step_duration, double omega_max) {
    HeadingSchedule s;
    s.theta0 = theta0;
    s.omega_max = omega_max;

    const double delta = lip::wrap_angle(target - theta0);
    const double rate =
        std::clamp(delta / (n_steps * step_duration), -omega_max, omega_max);

    s.rates.assign(static_cast<std::size_t>(n_steps), rate);
    s.headings.resize(static_cast<std::size_t>(n_steps));
    double cumulative = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        cumulative += s.rates[static_cast<std::size_t>(k)] * step_duration;
        s.headings[static_cast<std::size_t>(k)] = lip::wrap_angle(theta0 + cumulative);
    }
    return s;
}

}  // namespace lipnav::heading
