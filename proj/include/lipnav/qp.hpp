// Dense strictly convex QP solver for the per-replan footstep program:
//
//   min 0.5 u' H u + g' u   s.t.  lower_i <= coeffs_i . u <= upper_i
//
// Dual active-set method (Goldfarb-Idnani). Two-sided rows are expanded
// internally into one-sided halves; the working set is maintained through
// a Cholesky factor of H and a QR factor of the active normals, updated
// by Givens rotations. Problems here are tiny (n <= ~30, rows <= ~80), so
// everything is dense.
//
// A Tikhonov term 1e-9 I is always added to the hessian; reported KKT
// residuals certify that regularized problem.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lipnav/constraints.hpp"

namespace lipnav::qp {

enum class Status { Optimal, Infeasible, MaxIterations };

enum class Side { Lower, Upper };

/// One active bound, identified by row index and which side binds.
struct ActiveConstraint {
    int row = 0;
    Side side = Side::Lower;
};

struct DenseQP {
    Eigen::MatrixXd hessian;   ///< n x n, symmetric within 1e-12
    Eigen::VectorXd gradient;  ///< n
    std::vector<constraints::LinearRow> rows;

    int dim() const { return static_cast<int>(gradient.size()); }
};

struct QpSolution {
    Eigen::VectorXd u_star;
    double objective = 0.0;  ///< 0.5 u'Hu + g'u at u_star, original hessian
    Status status = Status::Optimal;
    std::vector<ActiveConstraint> active_set;  ///< insertion order
    Eigen::VectorXd multipliers;  ///< >= 0, aligned with active_set, original row scaling
    double kkt_residual = 0.0;    ///< max of stationarity / feasibility / complementarity
    int iterations = 0;           ///< active-set changes performed
};

/// Solve the QP. Throws std::invalid_argument for an asymmetric or
/// indefinite hessian or mismatched row lengths. warm_start lists
/// constraints to try activating first; it only affects the pivot order,
/// never the solution.
QpSolution solve(const DenseQP& qp, int max_iterations = 200,
                 const std::vector<ActiveConstraint>& warm_start = {});

/// Result of solve_with_slack: u_star spans the original variables only,
/// while active_set/multipliers/kkt_residual describe the augmented
/// problem (slack nonnegativity rows get indices rows.size()..+n_soft-1).
struct SlackSolution {
    QpSolution solution;
    Eigen::VectorXd slacks;  ///< one per soft row, order of soft_rows
    double max_slack = 0.0;
};

/// Relax the lower bounds of the listed rows by nonnegative slacks s with
/// added cost penalty * (s + s^2). Soft rows must be one-sided (upper =
/// +inf). Status Infeasible means the hard rows alone are infeasible.
SlackSolution solve_with_slack(const DenseQP& qp, const std::vector<int>& soft_rows,
                               double penalty = 1e4, int max_iterations = 200,
                               const std::vector<ActiveConstraint>& warm_start = {});

}  // namespace lipnav::qp
