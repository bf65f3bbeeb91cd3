#include "lipnav/simulator.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include "lipnav/ldcbf.hpp"
#include "lipnav/rng.hpp"

namespace lipnav::sim {

const char* to_string(Mode m) { return m == Mode::GlobalGoal ? "global" : "subgoal"; }

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::GoalReached: return "goal_reached";
        case Outcome::SafetyViolation: return "safety_violation";
        case Outcome::SolverFault: return "solver_fault";
        case Outcome::Timeout: return "timeout";
    }
    return "unknown";
}

void GenParams::validate() const {
    if (n_obstacles < 0) {
        throw std::invalid_argument("gen params: require n_obstacles >= 0");
    }
    if (!(min_radius > 0.0) || !(max_radius >= min_radius)) {
        throw std::invalid_argument("gen params: require 0 < min_radius <= max_radius");
    }
    if (!(clearance >= 0.0) || !(inflation >= 0.0)) {
        throw std::invalid_argument("gen params: require nonnegative clearance and inflation");
    }
    if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
        throw std::invalid_argument("gen params: degenerate bounds");
    }
    if (!bounds.contains(start) || !bounds.contains(goal)) {
        throw std::invalid_argument("gen params: start and goal must lie within bounds");
    }
}

void RunParams::validate() const {
    if (!(goal_tolerance > 0.0)) {
        throw std::invalid_argument("run params: require goal_tolerance > 0");
    }
    if (max_steps < 1) {
        throw std::invalid_argument("run params: require max_steps >= 1");
    }
    if (!(lookahead > 0.0)) {
        throw std::invalid_argument("run params: require lookahead > 0");
    }
    if (ticks_per_second < 1 || replans_per_second < 1) {
        throw std::invalid_argument("run params: require positive tick and replan rates");
    }
    if (ticks_per_second % replans_per_second != 0) {
        throw std::invalid_argument("run params: ticks_per_second must be divisible by replans_per_second");
    }
    if (!(disturbance_velocity >= 0.0)) {
        throw std::invalid_argument("run params: require disturbance_velocity >= 0");
    }
}

World generate_environment(std::uint64_t seed, const GenParams& params) {
    params.validate();
    World world;
    world.bounds = params.bounds;
    world.start = params.start;
    world.goal = params.goal;
    world.seed = seed;
    world.inflation = params.inflation;

    std::mt19937_64 gen(seed);
    int rejections = 0;
    while (static_cast<int>(world.obstacles.size()) < params.n_obstacles) {
        if (rejections > 10000) {
            throw GenerationFailed("environment generation exceeded 10,000 rejections (seed " +
                                   std::to_string(seed) + ")");
        }
        const double radius = rng::uniform(gen, params.min_radius, params.max_radius);
        const geom::Point2 center{
            rng::uniform(gen, params.bounds.x_min + radius, params.bounds.x_max - radius),
            rng::uniform(gen, params.bounds.y_min + radius, params.bounds.y_max - radius)};
        const int n_verts = rng::uniform_int(gen, 3, 8);
        std::vector<geom::Point2> points;
        points.reserve(static_cast<std::size_t>(n_verts));
        for (int i = 0; i < n_verts; ++i) {
            const double angle = rng::uniform(gen, 0.0, 2.0 * std::numbers::pi);
            const double rad = radius * std::sqrt(rng::canonical(gen));
            points.push_back({center.x + rad * std::cos(angle), center.y + rad * std::sin(angle)});
        }

        std::optional<geom::ConvexPolygon> hull;
        try {
            hull.emplace(geom::convex_hull(points));
        } catch (const geom::DegenerateInput&) {
            ++rejections;
            continue;
        }
        const geom::ConvexPolygon inflated =
            params.inflation > 0.0 ? geom::inflate(*hull, params.inflation) : *hull;

        bool ok = true;
        for (const geom::Point2 p : {params.start, params.goal}) {
            if (geom::point_in_polygon(inflated, p) ||
                geom::boundary_distance(inflated, p) < params.clearance) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (const geom::ConvexPolygon& other : world.inflated_obstacles) {
                if (geom::polygon_distance(inflated, other) < params.clearance) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            ++rejections;
            continue;
        }
        world.obstacles.push_back(std::move(*hull));
        world.inflated_obstacles.push_back(inflated);
    }
    return world;
}

EpisodeLog run_episode(const World& world, Mode mode, const mpc::MpcParams& mpc_params,
                       const rrt::RrtParams& rrt_params, const RunParams& run_params) {
    mpc_params.validate();
    rrt_params.validate();
    run_params.validate();

    const int tps = run_params.ticks_per_second;
    const int ticks_per_replan = tps / run_params.replans_per_second;
    const double exact_ticks = mpc_params.step_duration * tps;
    const int ticks_per_step = static_cast<int>(std::lround(exact_ticks));
    if (std::abs(exact_ticks - ticks_per_step) > 1e-9 || ticks_per_step < 1 ||
        ticks_per_step % ticks_per_replan != 0) {
        throw std::invalid_argument(
            "run params: step duration must span an integer number of replan intervals");
    }

    const auto wall_begin = std::chrono::steady_clock::now();
    EpisodeLog log;
    log.mode = mode;
    log.world_seed = world.seed;

    auto finish = [&](Outcome outcome) {
        log.outcome = outcome;
        log.sim_seconds = log.steps * mpc_params.step_duration;
        log.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_begin).count();
    };

    std::size_t cursor = 0;
    if (mode == Mode::SubGoal) {
        rrt::RrtParams rp = rrt_params;
        rp.seed = world.seed;            // global path is a function of the world
        rp.inflation = world.inflation;  // same conservatism as the footstep planner
        try {
            log.subgoal_path =
                rrt::plan_path(world.obstacles, world.bounds, world.start, world.goal, rp);
        } catch (const rrt::NoPathFound& e) {
            log.fault_message = e.what();
            finish(Outcome::SolverFault);
            return log;
        }
    }

    lip::LipState state;
    state.p_x = world.start.x;
    state.p_y = world.start.y;
    state.theta = lip::wrap_angle(run_params.initial_heading);
    constraints::Foot stance = run_params.initial_stance;
    geom::Point2 cur_foot = world.start;  // pendulum pivot before the first commit
    double cur_omega = 0.0;

    mpc::Planner planner(mpc_params);
    std::optional<mpc::MpcResult> pending;
    std::size_t pending_replan = 0;
    std::mt19937_64 noise(run_params.disturbance_seed ^ world.seed);
    const double dt = 1.0 / tps;
    int tick = 0;

    while (true) {
        log.ticks.push_back({tick, state});

        {
            bool violated = false;
            for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
                if (geom::point_in_polygon(world.obstacles[i], state.position())) {
                    log.violation_obstacle = static_cast<int>(i);
                    log.violation_point = state.position();
                    violated = true;
                    break;
                }
            }
            if (violated) {
                log.steps = tick / ticks_per_step;
                finish(Outcome::SafetyViolation);
                break;
            }
        }

        if (tick > 0 && tick % ticks_per_step == 0) {
            log.step_records.back().state_end = state;
            log.step_records.back().completed = true;
            log.steps = tick / ticks_per_step;
            if (geom::distance(state.position(), world.goal) <= run_params.goal_tolerance) {
                finish(Outcome::GoalReached);
                break;
            }
            if (log.steps >= run_params.max_steps) {
                finish(Outcome::Timeout);
                break;
            }
            if (!pending) {
                log.fault_message = "no plan available at step boundary";
                finish(Outcome::SolverFault);
                break;
            }
            stance = constraints::opposite(stance);
            cur_foot = pending->controls[0].foot();
            cur_omega = pending->controls[0].omega;
            log.replans[pending_replan].committed = true;

            StepRecord rec;
            rec.step_index = log.steps;
            rec.stance = stance;
            rec.control = pending->controls[0];
            rec.state_begin = state;
            rec.heading_ref = pending->schedule.theta0;
            rec.s_v = stance == constraints::Foot::Right ? 1.0 : -1.0;
            rec.sim_time_begin = static_cast<double>(tick) / tps;
            log.step_records.push_back(rec);
        }

        if (tick % ticks_per_replan == 0) {
            geom::Point2 target = world.goal;
            if (mode == Mode::SubGoal) {
                target = rrt::next_subgoal(log.subgoal_path, state.position(), run_params.lookahead,
                                           cursor);
            }
            const double t_remaining =
                tick == 0 ? 0.0
                          : static_cast<double>(ticks_per_step - tick % ticks_per_step) / tps;
            const lip::LipState x0 = lip::estimate_end_of_step_state(
                state, cur_foot, cur_omega, t_remaining, mpc_params.com_height);
            const constraints::Foot stance0 = tick == 0 ? stance : constraints::opposite(stance);

            try {
                mpc::MpcResult res = planner.plan(x0, stance0, target, world.inflated_obstacles);

                ReplanRecord rr;
                rr.tick = tick;
                rr.x0 = x0;
                rr.target = target;
                rr.half_spaces.reserve(res.diagnostics.half_spaces.size());
                for (const ldcbf::HalfSpace& hs : res.diagnostics.half_spaces) {
                    rr.half_spaces.push_back(
                        {hs.source_obstacle, hs.eta(0), hs.eta(1), hs.c.x, hs.c.y});
                }
                rr.predicted = res.predicted_states;
                rr.controls = res.controls;
                rr.status = res.diagnostics.status;
                rr.objective = res.diagnostics.objective;
                rr.qp_objective = res.diagnostics.qp_objective;
                rr.max_slack = res.diagnostics.max_slack;
                rr.kkt_residual = res.diagnostics.kkt_residual;
                rr.solve_seconds = res.diagnostics.solve_seconds;
                rr.iterations = res.diagnostics.iterations;
                log.replans.push_back(std::move(rr));

                pending = std::move(res);
                pending_replan = log.replans.size() - 1;

                if (tick == 0) {
                    // bootstrap: the first step starts now with this plan
                    cur_foot = pending->controls[0].foot();
                    cur_omega = pending->controls[0].omega;
                    log.replans.back().committed = true;
                    StepRecord rec;
                    rec.step_index = 0;
                    rec.stance = stance;
                    rec.control = pending->controls[0];
                    rec.state_begin = state;
                    rec.heading_ref = pending->schedule.theta0;
                    rec.s_v = stance == constraints::Foot::Right ? 1.0 : -1.0;
                    rec.sim_time_begin = 0.0;
                    log.step_records.push_back(rec);
                }
            } catch (const mpc::SafetyFault& e) {
                // Planner start state inside an inflated obstacle. If the raw
                // body is inside too the monitor verdict wins.
                bool raw_inside = false;
                for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
                    if (geom::point_in_polygon(world.obstacles[i], state.position())) {
                        log.violation_obstacle = static_cast<int>(i);
                        log.violation_point = state.position();
                        raw_inside = true;
                        break;
                    }
                }
                log.steps = tick / ticks_per_step;
                log.fault_message = "tick " + std::to_string(tick) + ": " + e.what();
                finish(raw_inside ? Outcome::SafetyViolation : Outcome::SolverFault);
                break;
            } catch (const mpc::SolverFault& e) {
                log.steps = tick / ticks_per_step;
                log.fault_message = "tick " + std::to_string(tick) + ": " + e.what();
                finish(Outcome::SolverFault);
                break;
            }
        }

        state = lip::propagate_within_step(state, cur_foot, cur_omega, mpc_params.com_height, dt);
        if (run_params.disturbance_velocity > 0.0) {
            state.v_x += rng::uniform(noise, -run_params.disturbance_velocity,
                                      run_params.disturbance_velocity);
            state.v_y += rng::uniform(noise, -run_params.disturbance_velocity,
                                      run_params.disturbance_velocity);
        }
        ++tick;
    }

    return log;
}

}  // namespace lipnav::sim
