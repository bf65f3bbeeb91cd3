#include "lipnav/lip_model.hpp"

#include <cmath>
#include <numbers>

namespace lipnav::lip {

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) {
        r += 2.0 * std::numbers::pi;
    }
    return r;
}

StepMatrices step_matrices(double com_height, double duration) {
    if (!(com_height > 0.0)) {
        throw InvalidParameter("CoM height must be positive");
    }
    if (!(duration >= 0.0)) {
        throw InvalidParameter("step duration must be non-negative");
    }
    StepMatrices m;
    m.beta = std::sqrt(kGravity / com_height);
    m.duration = duration;
    const double bt = m.beta * duration;
    const double ch = std::cosh(bt);
    const double sh = std::sinh(bt);
    m.a11 = ch;
    m.a12 = sh / m.beta;
    m.a21 = m.beta * sh;
    m.a22 = ch;
    m.b1 = 1.0 - ch;
    m.b2 = -m.beta * sh;
    return m;
}

namespace {

// Displacement form of the A_d/B_d map; (p - f) = 0 with v = 0 stays a
// fixed point to the last bit.
LipState apply(const LipState& x, geom::Point2 foot, double omega, const StepMatrices& m) {
    const double ch = m.a11;
    const double sh_over_beta = m.a12;
    const double beta_sh = m.a21;
    LipState out;
    out.p_x = x.p_x + (ch - 1.0) * (x.p_x - foot.x) + sh_over_beta * x.v_x;
    out.v_x = beta_sh * (x.p_x - foot.x) + ch * x.v_x;
    out.p_y = x.p_y + (ch - 1.0) * (x.p_y - foot.y) + sh_over_beta * x.v_y;
    out.v_y = beta_sh * (x.p_y - foot.y) + ch * x.v_y;
    out.theta = wrap_angle(x.theta + omega * m.duration);
    return out;
}

}  // namespace

LipState step_to_step(const LipState& x, const LipControl& u, double com_height,
                      double step_duration) {
    return apply(x, u.foot(), u.omega, step_matrices(com_height, step_duration));
}

LipState propagate_within_step(const LipState& x, geom::Point2 foot, double omega,
                               double com_height, double dt) {
    return apply(x, foot, omega, step_matrices(com_height, dt));
}

LipState estimate_end_of_step_state(const LipState& x_now, geom::Point2 current_foot,
                                    double omega_now, double t_remaining, double com_height) {
    return propagate_within_step(x_now, current_foot, omega_now, com_height, t_remaining);
}

}  // namespace lipnav::lip
