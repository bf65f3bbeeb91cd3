// Receding-horizon footstep planner: per replan, fix the heading schedule,
// condense the step-to-step dynamics, assemble goal-distance cost plus
// kinematic rows (hard) and obstacle barrier rows (soft), and solve the
// resulting dense QP. The first returned control is the executable command.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lipnav/condensing.hpp"
#include "lipnav/constraints.hpp"
#include "lipnav/geometry.hpp"
#include "lipnav/heading.hpp"
#include "lipnav/ldcbf.hpp"
#include "lipnav/lip_model.hpp"
#include "lipnav/qp.hpp"

namespace lipnav::mpc {

/// Planner start state sits inside an obstacle; the episode is already
/// unsafe and no half-space can be anchored.
struct SafetyFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The QP could not produce a certified command (hard rows infeasible or
/// iteration cap hit).
struct SolverFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MpcParams {
    int n_steps = 3;
    double step_duration = 0.4;  // s
    double com_height = 1.0;     // m
    constraints::KinematicLimits limits;
    ldcbf::BarrierParams barrier;
    double omega_max = 0.49008845396000775;  // rad/s, 0.156 * pi
    double slack_penalty = 1e4;
    double control_regularization = 0.0;  // optional pull of footsteps toward the CoM path
    int qp_max_iterations = 200;

    /// Throws std::invalid_argument on a broken field.
    void validate() const;
};

struct RowMargin {
    std::string label;
    double margin = 0.0;  // min distance to either bound; negative = violated
};

struct MpcDiagnostics {
    qp::Status status = qp::Status::Optimal;
    double objective = 0.0;     // sum over the horizon of |p(k) - goal|^2
    double qp_objective = 0.0;  // condensed QP value (constant term dropped)
    double max_slack = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;
    double solve_seconds = 0.0;
    int active_set_size = 0;
    std::vector<int> active_obstacles;
    std::vector<ldcbf::HalfSpace> half_spaces;  // the frozen barriers this solve used
    std::vector<double> slacks;     // per soft row
    std::vector<RowMargin> margins;  // every row at the solution
};

struct MpcResult {
    std::vector<lip::LipControl> controls;       // N entries; [0] executable
    std::vector<lip::LipState> predicted_states; // x_1..x_N
    heading::HeadingSchedule schedule;
    MpcDiagnostics diagnostics;
};

/// Goal-distance cost over predicted positions, as 0.5 u'Hu + g'u with the
/// constant term dropped: H = 2 sum M_k'M_k, g = 2 sum M_k'(m_k - goal).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> build_cost(const condensing::AffineStateMap& map,
                                                       geom::Point2 goal);

/// One planner per episode. Carries the previous solve's active set as a
/// warm-start hint, reused only when the stance parity and the active
/// obstacle set both match (identical row structure).
class Planner {
public:
    explicit Planner(MpcParams params);

    MpcResult plan(const lip::LipState& x0, constraints::Foot stance0, geom::Point2 goal,
                   const std::vector<geom::ConvexPolygon>& world);

    const MpcParams& params() const { return params_; }

    /// Drop warm-start memory (e.g. when the world changes).
    void reset();

private:
    MpcParams params_;
    bool have_memory_ = false;
    constraints::Foot last_stance_ = constraints::Foot::Left;
    std::vector<int> last_active_ids_;
    std::vector<qp::ActiveConstraint> last_active_set_;
};

}  // namespace lipnav::mpc
