#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lipnav/heading.hpp"
#include "lipnav/lip_model.hpp"

namespace lipnav::condensing {

/// Predicted states x_1..x_N as affine functions of the stacked footstep
/// vector u = (f_x0, f_y0, ..., f_x(N-1), f_y(N-1)), with the heading
/// schedule fixed. Channel order per step: p_x, v_x, p_y, v_y.
struct AffineStateMap {
    int n_steps = 0;
    Eigen::Vector2d p0{0.0, 0.0};  // position at k = 0 (pure constant)
    Eigen::Vector2d v0{0.0, 0.0};
    double theta0 = 0.0;
    std::vector<double> thetas;             // theta_k, k = 1..N
    std::vector<Eigen::MatrixXd> coeffs;    // k = 1..N, each 4 x 2N
    std::vector<Eigen::Vector4d> offsets;   // k = 1..N

    int decision_dim() const { return 2 * n_steps; }

    // Position/velocity of step k as (coefficient block, constant); k = 0
    // returns the constant initial state with zero coefficients.
    Eigen::MatrixXd position_coeffs(int k) const;
    Eigen::Vector2d position_offset(int k) const;
    Eigen::MatrixXd velocity_coeffs(int k) const;
    Eigen::Vector2d velocity_offset(int k) const;

    /// States x_1..x_N at a concrete decision vector.
    std::vector<lip::LipState> evaluate(const Eigen::VectorXd& u) const;
};

AffineStateMap condense(const lip::LipState& x0, const heading::HeadingSchedule& schedule,
                        double com_height, double step_duration, int n_steps);

}  // namespace lipnav::condensing
