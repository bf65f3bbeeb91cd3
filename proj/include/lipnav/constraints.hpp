// Linear inequality rows over the stacked footstep decision vector:
// walking-velocity bounds, leg reachability, and turning maneuverability.
//
// All rows are expressed as lower <= coeffs . u <= upper with any constant
// (state-dependent) part folded into the bounds, so a QP can consume them
// directly.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lipnav/condensing.hpp"
#include "lipnav/heading.hpp"

namespace lipnav::constraints {

/// One two-sided linear constraint on the decision vector u.
struct LinearRow {
    Eigen::VectorXd coeffs;  ///< length 2N, over (f_x0, f_y0, ..., f_x(N-1), f_y(N-1))
    double lower = 0.0;      ///< may be -inf for one-sided rows
    double upper = 0.0;      ///< may be +inf for one-sided rows
    std::string label;       ///< diagnostic tag, e.g. "vel_lat[1]"
};

/// Which foot is planted. The stance foot alternates every step.
enum class Foot { Left, Right };

constexpr Foot opposite(Foot f) { return f == Foot::Left ? Foot::Right : Foot::Left; }

/// Stance foot during step k, given the stance at step 0.
constexpr Foot stance_at(Foot stance0, int k) {
    return (k % 2 == 0) ? stance0 : opposite(stance0);
}

/// Velocity and reachability limits. Defaults follow the reference
/// controller tuning.
struct KinematicLimits {
    double v_x_min = -0.1;           ///< m/s, body-frame longitudinal
    double v_x_max = 0.8;            ///< m/s
    double v_y_min = 0.1;            ///< m/s, body-frame lateral, away from stance foot
    double v_y_max = 0.4;            ///< m/s
    double l_max = 0.17320508075688773;  ///< m, max CoM-to-footstep reach (0.1 * sqrt(3))
    double alpha = 1.44;             ///< speed/turn-rate trade-off gain

    /// Throws std::invalid_argument when a bound ordering or sign is broken.
    void validate() const;
};

/// Body-frame velocity bounds on the end-of-step velocities v(1)..v(N).
///
/// Step k (0-based) uses heading theta_k; the lateral row is negated when
/// the left foot is the stance so that [v_y_min, v_y_max] always pushes the
/// CoM away from the stance foot.
std::vector<LinearRow> velocity_rows(const heading::HeadingSchedule& schedule, Foot stance0,
                                     const KinematicLimits& limits,
                                     const condensing::AffineStateMap& map);

/// Componentwise bound |R(-theta_k) (f_k - p(k))| <= l_max for k = 0..N-1.
std::vector<LinearRow> reachability_rows(const heading::HeadingSchedule& schedule,
                                         const KinematicLimits& limits,
                                         const condensing::AffineStateMap& map);

/// Upper bound on forward speed while turning, one row per k = 1..N:
/// cos(theta_k) v_x(k) + sin(theta_k) v_y(k) <= v_x_max - (alpha/pi)|rate_{k-1}|.
std::vector<LinearRow> maneuverability_rows(const heading::HeadingSchedule& schedule,
                                            const KinematicLimits& limits,
                                            const condensing::AffineStateMap& map);

}  // namespace lipnav::constraints
