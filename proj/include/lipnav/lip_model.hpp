#pragma once

#include <stdexcept>

#include "lipnav/geometry.hpp"

namespace lipnav::lip {

inline constexpr double kGravity = 9.81;  // m/s^2

struct InvalidParameter : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Heading-augmented 3D-LIP state in the world frame.
struct LipState {
    double p_x = 0.0;  // CoM position, m
    double v_x = 0.0;  // CoM velocity, m/s
    double p_y = 0.0;
    double v_y = 0.0;
    double theta = 0.0;  // heading, rad, wrapped to (-pi, pi]

    geom::Point2 position() const { return {p_x, p_y}; }
};

/// Per-step decision: stance-foot position (world frame) and turning rate.
struct LipControl {
    double f_x = 0.0;  // m
    double f_y = 0.0;  // m
    double omega = 0.0;  // rad/s

    geom::Point2 foot() const { return {f_x, f_y}; }
};

/// Closed-form discrete matrices for one axis of the LIP over a fixed
/// duration: [p; v]_{k+1} = A_d [p; v]_k + B_d f.
struct StepMatrices {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;  // A_d, row major
    double b1 = 0.0, b2 = 0.0;                          // B_d
    double beta = 0.0;                                  // sqrt(g/H), 1/s
    double duration = 0.0;                              // s
};

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

StepMatrices step_matrices(double com_height, double duration);

/// Advance one full step of duration T: (p, v) through the discrete LIP
/// map with stance foot u, heading through theta + omega * T.
LipState step_to_step(const LipState& x, const LipControl& u, double com_height, double step_duration);

/// Same closed form for an arbitrary elapsed time dt within a step.
LipState propagate_within_step(const LipState& x, geom::Point2 foot, double omega,
                               double com_height, double dt);

/// State at the end of the current step given the time still remaining;
/// the MPC initial state.
LipState estimate_end_of_step_state(const LipState& x_now, geom::Point2 current_foot,
                                    double omega_now, double t_remaining, double com_height);

}  // namespace lipnav::lip
