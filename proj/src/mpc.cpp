#include "lipnav/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipnav::mpc {

void MpcParams::validate() const {
    if (n_steps < 1) {
        throw std::invalid_argument("mpc params: require n_steps >= 1");
    }
    if (!(step_duration > 0.0) || !(com_height > 0.0)) {
        throw std::invalid_argument("mpc params: require positive step duration and CoM height");
    }
    if (!(omega_max > 0.0)) {
        throw std::invalid_argument("mpc params: require omega_max > 0");
    }
    if (!(slack_penalty > 0.0)) {
        throw std::invalid_argument("mpc params: require slack_penalty > 0");
    }
    if (control_regularization < 0.0) {
        throw std::invalid_argument("mpc params: require control_regularization >= 0");
    }
    if (qp_max_iterations < 1) {
        throw std::invalid_argument("mpc params: require qp_max_iterations >= 1");
    }
    limits.validate();
    barrier.validate();
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> build_cost(const condensing::AffineStateMap& map,
                                                       geom::Point2 goal) {
    const int dim = map.decision_dim();
    Eigen::MatrixXd hessian = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd gradient = Eigen::VectorXd::Zero(dim);
    const Eigen::Vector2d g{goal.x, goal.y};
    for (int k = 1; k <= map.n_steps; ++k) {
        const Eigen::MatrixXd mk = map.position_coeffs(k);
        const Eigen::Vector2d ok = map.position_offset(k);
        hessian.noalias() += 2.0 * mk.transpose() * mk;
        gradient.noalias() += 2.0 * mk.transpose() * (ok - g);
    }
    hessian = 0.5 * (hessian + hessian.transpose()).eval();
    return {std::move(hessian), std::move(gradient)};
}

Planner::Planner(MpcParams params) : params_(std::move(params)) { params_.validate(); }

void Planner::reset() {
    have_memory_ = false;
    last_active_ids_.clear();
    last_active_set_.clear();
}

MpcResult Planner::plan(const lip::LipState& x0, constraints::Foot stance0, geom::Point2 goal,
                        const std::vector<geom::ConvexPolygon>& world) {
    const auto t_begin = std::chrono::steady_clock::now();
    const geom::Point2 pos = x0.position();

    const std::vector<int> active_ids =
        ldcbf::active_obstacles(world, pos, params_.barrier.active_radius);
    std::vector<ldcbf::HalfSpace> half_spaces;
    half_spaces.reserve(active_ids.size());
    for (const int id : active_ids) {
        try {
            half_spaces.push_back(
                ldcbf::build_halfspace(world[static_cast<std::size_t>(id)], pos, id));
        } catch (const geom::QueryInsideObstacle&) {
            throw SafetyFault("planner start position is inside obstacle " + std::to_string(id));
        }
    }

    double target = x0.theta;
    try {
        target = heading::target_heading(pos, goal);
    } catch (const heading::AtGoal&) {
        // standing on the goal: keep the current heading
    }
    const heading::HeadingSchedule schedule = heading::precompute_turning_rates(
        x0.theta, target, params_.n_steps, params_.step_duration, params_.omega_max);

    const condensing::AffineStateMap map =
        condensing::condense(x0, schedule, params_.com_height, params_.step_duration, params_.n_steps);

    qp::DenseQP problem;
    std::tie(problem.hessian, problem.gradient) = build_cost(map, goal);
    if (params_.control_regularization > 0.0) {
        // Pull each footstep toward its step's predicted CoM position.
        const double w = params_.control_regularization;
        for (int k = 0; k < params_.n_steps; ++k) {
            Eigen::MatrixXd d = -map.position_coeffs(k);
            d(0, 2 * k) += 1.0;
            d(1, 2 * k + 1) += 1.0;
            const Eigen::Vector2d off = -map.position_offset(k);
            problem.hessian.noalias() += 2.0 * w * d.transpose() * d;
            problem.gradient.noalias() += 2.0 * w * d.transpose() * off;
        }
        problem.hessian = 0.5 * (problem.hessian + problem.hessian.transpose()).eval();
    }

    auto append = [&problem](std::vector<constraints::LinearRow>&& rows) {
        for (constraints::LinearRow& row : rows) {
            problem.rows.push_back(std::move(row));
        }
    };
    append(constraints::velocity_rows(schedule, stance0, params_.limits, map));
    append(constraints::reachability_rows(schedule, params_.limits, map));
    append(constraints::maneuverability_rows(schedule, params_.limits, map));
    std::vector<int> soft_rows;
    soft_rows.reserve(half_spaces.size() * static_cast<std::size_t>(params_.n_steps));
    for (const ldcbf::HalfSpace& hs : half_spaces) {
        std::vector<constraints::LinearRow> rows = ldcbf::ldcbf_rows(hs, params_.barrier, map);
        for (constraints::LinearRow& row : rows) {
            soft_rows.push_back(static_cast<int>(problem.rows.size()));
            problem.rows.push_back(std::move(row));
        }
    }

    const bool reuse = have_memory_ && last_stance_ == stance0 && last_active_ids_ == active_ids;
    const std::vector<qp::ActiveConstraint>& hints =
        reuse ? last_active_set_ : std::vector<qp::ActiveConstraint>{};

    qp::SlackSolution sol = qp::solve_with_slack(problem, soft_rows, params_.slack_penalty,
                                                 params_.qp_max_iterations, hints);

    if (sol.solution.status != qp::Status::Optimal) {
        reset();
        throw SolverFault(sol.solution.status == qp::Status::Infeasible
                              ? "hard constraint rows are infeasible"
                              : "qp iteration cap reached without convergence");
    }

    have_memory_ = true;
    last_stance_ = stance0;
    last_active_ids_ = active_ids;
    last_active_set_ = sol.solution.active_set;

    MpcResult result;
    result.schedule = schedule;
    result.predicted_states = map.evaluate(sol.solution.u_star);
    result.controls.reserve(static_cast<std::size_t>(params_.n_steps));
    for (int k = 0; k < params_.n_steps; ++k) {
        lip::LipControl c;
        c.f_x = sol.solution.u_star(2 * k);
        c.f_y = sol.solution.u_star(2 * k + 1);
        c.omega = schedule.rates[static_cast<std::size_t>(k)];
        result.controls.push_back(c);
    }

    MpcDiagnostics& diag = result.diagnostics;
    diag.status = sol.solution.status;
    diag.qp_objective = sol.solution.objective;
    diag.objective = 0.0;
    for (const lip::LipState& s : result.predicted_states) {
        const double dx = s.p_x - goal.x;
        const double dy = s.p_y - goal.y;
        diag.objective += dx * dx + dy * dy;
    }
    diag.max_slack = sol.max_slack;
    diag.kkt_residual = sol.solution.kkt_residual;
    diag.iterations = sol.solution.iterations;
    diag.active_set_size = static_cast<int>(sol.solution.active_set.size());
    diag.active_obstacles = active_ids;
    diag.half_spaces = half_spaces;
    diag.slacks.assign(sol.slacks.data(), sol.slacks.data() + sol.slacks.size());
    diag.margins.reserve(problem.rows.size());
    for (const constraints::LinearRow& row : problem.rows) {
        const double val = row.coeffs.dot(sol.solution.u_star);
        const double lo = std::isfinite(row.lower) ? val - row.lower
                                                   : std::numeric_limits<double>::infinity();
        const double hi = std::isfinite(row.upper) ? row.upper - val
                                                   : std::numeric_limits<double>::infinity();
        diag.margins.push_back({row.label, std::min(lo, hi)});
    }
    diag.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return result;
}

}  // namespace lipnav::mpc
