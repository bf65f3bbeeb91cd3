#include "lipnav/condensing.hpp"

#include <stdexcept>

namespace lipnav::condensing {

Eigen::MatrixXd AffineStateMap::position_coeffs(int k) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2, decision_dim());
    if (k > 0) {
        out.row(0) = coeffs[static_cast<std::size_t>(k - 1)].row(0);
        out.row(1) = coeffs[static_cast<std::size_t>(k - 1)].row(2);
    }
    return out;
}

Eigen::Vector2d AffineStateMap::position_offset(int k) const {
    if (k == 0) {
        return p0;
    }
    const Eigen::Vector4d& o = offsets[static_cast<std::size_t>(k - 1)];
    return {o(0), o(2)};
}

Eigen::MatrixXd AffineStateMap::velocity_coeffs(int k) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2, decision_dim());
    if (k > 0) {
        out.row(0) = coeffs[static_cast<std::size_t>(k - 1)].row(1);
        out.row(1) = coeffs[static_cast<std::size_t>(k - 1)].row(3);
    }
    return out;
}

Eigen::Vector2d AffineStateMap::velocity_offset(int k) const {
    if (k == 0) {
        return v0;
    }
    const Eigen::Vector4d& o = offsets[static_cast<std::size_t>(k - 1)];
    return {o(1), o(3)};
}

std::vector<lip::LipState> AffineStateMap::evaluate(const Eigen::VectorXd& u) const {
    std::vector<lip::LipState> states;
    states.reserve(static_cast<std::size_t>(n_steps));
    for (int k = 1; k <= n_steps; ++k) {
        const Eigen::Vector4d v =
            coeffs[static_cast<std::size_t>(k - 1)] * u + offsets[static_cast<std::size_t>(k - 1)];
        lip::LipState s;
        s.p_x = v(0);
        s.v_x = v(1);
        s.p_y = v(2);
        s.v_y = v(3);
        s.theta = thetas[static_cast<std::size_t>(k - 1)];
        states.push_back(s);
    }
    return states;
}

AffineStateMap condense(const lip::LipState& x0, const heading::HeadingSchedule& schedule,
                        double com_height, double step_duration, int n_steps) {
    if (static_cast<int>(schedule.rates.size()) != n_steps) {
        throw std::invalid_argument("heading schedule length does not match the horizon");
    }
    const lip::StepMatrices m = lip::step_matrices(com_height, step_duration);
    Eigen::Matrix2d A;
    A << m.a11, m.a12, m.a21, m.a22;
    Eigen::Vector2d B{m.b1, m.b2};

    AffineStateMap map;
    map.n_steps = n_steps;
    map.p0 = {x0.p_x, x0.p_y};
    map.v0 = {x0.v_x, x0.v_y};
    map.theta0 = x0.theta;
    map.thetas = schedule.headings;

    const int dim = 2 * n_steps;
    // Per-axis running blocks: z_k = A^k z_0 + sum_j A^(k-1-j) B u_j.
    Eigen::MatrixXd cx = Eigen::MatrixXd::Zero(2, dim);
    Eigen::MatrixXd cy = Eigen::MatrixXd::Zero(2, dim);
    Eigen::Vector2d zx{x0.p_x, x0.v_x};
    Eigen::Vector2d zy{x0.p_y, x0.v_y};

    for (int k = 1; k <= n_steps; ++k) {
        cx = A * cx;
        cy = A * cy;
        cx.col(2 * (k - 1)) = B;
        cy.col(2 * (k - 1) + 1) = B;
        zx = A * zx;
        zy = A * zy;

        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(4, dim);
        block.row(0) = cx.row(0);
        block.row(1) = cx.row(1);
        block.row(2) = cy.row(0);
        block.row(3) = cy.row(1);
        map.coeffs.push_back(std::move(block));
        map.offsets.push_back(Eigen::Vector4d{zx(0), zx(1), zy(0), zy(1)});
    }
    return map;
}

}  // namespace lipnav::condensing
