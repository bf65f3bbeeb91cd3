// Closed-loop episode runner. The plant is the LIP model itself, advanced
// in 1 ms micro-ticks; the footstep planner replans at 20 Hz from the
// predicted end-of-step state, and the newest plan is committed at each
// step boundary. A safety monitor checks raw (uninflated) obstacle
// containment every micro-tick, while the planner sees inflated copies.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lipnav/constraints.hpp"
#include "lipnav/geometry.hpp"
#include "lipnav/lip_model.hpp"
#include "lipnav/mpc.hpp"
#include "lipnav/qp.hpp"
#include "lipnav/rrt.hpp"

namespace lipnav::sim {

struct GenerationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct World {
    std::vector<geom::ConvexPolygon> obstacles;           // plant truth
    std::vector<geom::ConvexPolygon> inflated_obstacles;  // planner view
    geom::Rect bounds;
    geom::Point2 start{0.0, 0.0};
    geom::Point2 goal{10.0, 10.0};
    std::uint64_t seed = 0;
    double inflation = 0.35;  // m, footprint radius baked into inflated copies
};

struct GenParams {
    int n_obstacles = 8;
    geom::Rect bounds{-2.0, -2.0, 12.0, 12.0};
    double min_radius = 0.4;  // m, vertex-disk radius range
    double max_radius = 1.0;
    double clearance = 0.5;  // m, min inflated distance to start/goal/each other
    double inflation = 0.35;
    geom::Point2 start{0.0, 0.0};
    geom::Point2 goal{10.0, 10.0};

    /// Throws std::invalid_argument on a broken field.
    void validate() const;
};

/// Seeded random world: n convex polygons (3..8-gon hulls of points in a
/// disk), rejection-sampled for clearance. Deterministic per seed. Throws
/// GenerationFailed after 10,000 rejected candidates.
World generate_environment(std::uint64_t seed, const GenParams& params);

enum class Mode { GlobalGoal, SubGoal };
enum class Outcome { GoalReached, SafetyViolation, SolverFault, Timeout };

const char* to_string(Mode m);
const char* to_string(Outcome o);

struct RunParams {
    double goal_tolerance = 0.3;  // m, checked at step boundaries
    int max_steps = 200;
    double lookahead = 1.5;  // m, sub-goal handoff distance
    int ticks_per_second = 1000;
    int replans_per_second = 20;
    double initial_heading = 0.0;  // rad
    constraints::Foot initial_stance = constraints::Foot::Right;
    double disturbance_velocity = 0.0;  // m/s, per-tick bounded noise, off by default
    std::uint64_t disturbance_seed = 0;

    /// Throws std::invalid_argument on a broken field.
    void validate() const;
};

struct TickRecord {
    int tick = 0;  // sim time = tick / ticks_per_second
    lip::LipState state;
};

struct StepRecord {
    int step_index = 0;
    constraints::Foot stance = constraints::Foot::Right;  // pivot side during the step
    lip::LipControl control;       // committed stance-foot position and turning rate
    lip::LipState state_begin;     // realized state at the step's starting boundary
    lip::LipState state_end;       // realized state at the step's end boundary
    bool completed = false;        // end boundary was reached
    double heading_ref = 0.0;      // theta_0 of the committed plan
    double s_v = 1.0;              // lateral sign of the plan's first velocity row
    double sim_time_begin = 0.0;
};

struct HalfSpaceRecord {
    int obstacle = 0;
    double eta_x = 0.0, eta_y = 0.0;
    double c_x = 0.0, c_y = 0.0;
};

struct ReplanRecord {
    int tick = 0;
    lip::LipState x0;  // predicted end-of-step state handed to the planner
    geom::Point2 target;
    std::vector<HalfSpaceRecord> half_spaces;
    std::vector<lip::LipState> predicted;
    std::vector<lip::LipControl> controls;
    qp::Status status = qp::Status::Optimal;
    double objective = 0.0;
    double qp_objective = 0.0;
    double max_slack = 0.0;
    double kkt_residual = 0.0;
    double solve_seconds = 0.0;
    int iterations = 0;
    bool committed = false;  // became the stance command at a boundary
};

struct EpisodeLog {
    Outcome outcome = Outcome::Timeout;
    Mode mode = Mode::GlobalGoal;
    std::uint64_t world_seed = 0;
    int steps = 0;               // completed steps
    double sim_seconds = 0.0;    // steps * step_duration
    double wall_seconds = 0.0;
    std::string fault_message;   // populated for SolverFault
    int violation_obstacle = -1;
    geom::Point2 violation_point{0.0, 0.0};
    std::vector<TickRecord> ticks;
    std::vector<StepRecord> step_records;
    std::vector<ReplanRecord> replans;
    rrt::Waypath subgoal_path;   // empty in GlobalGoal mode
};

/// Run one episode to termination. Planner faults become outcome tags,
/// never exceptions. Deterministic for fixed (world, mode, params).
EpisodeLog run_episode(const World& world, Mode mode, const mpc::MpcParams& mpc_params,
                       const rrt::RrtParams& rrt_params, const RunParams& run_params);

}  // namespace lipnav::sim
