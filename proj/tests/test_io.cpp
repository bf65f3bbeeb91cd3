#include <doctest.h>

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "lipnav/episode_io.hpp"
#include "lipnav/rng.hpp"
#include "lipnav/scenario.hpp"
#include "lipnav/simulator.hpp"

using namespace lipnav;

namespace {

bool same_state(const lip::LipState& a, const lip::LipState& b) {
    return a.p_x == b.p_x && a.v_x == b.v_x && a.p_y == b.p_y && a.v_y == b.v_y &&
           a.theta == b.theta;
}

}  // namespace

TEST_CASE("float formatting replays bit-exactly") {
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(-0.25) == "-0.25");
    CHECK(io::format_double(0.0) == "0");
    CHECK(io::format_double(2.0) == "2");
    CHECK(io::format_double(0.4) == "0.40000000000000002");

    std::mt19937_64 gen(501);
    for (int i = 0; i < 1000; ++i) {
        double v = rng::uniform(gen, -1e6, 1e6);
        if (i % 3 == 0) {
            v = rng::uniform(gen, -1.0, 1.0) * 1e-9;
        }
        const std::string s = io::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("an empty config object falls back to the reference tuning") {
    const io::ScenarioConfig cfg = io::parse_config("{}");
    CHECK(cfg.mode == sim::Mode::GlobalGoal);
    CHECK(cfg.world_seed == 1);
    CHECK(cfg.world_file.empty());
    CHECK(cfg.inline_obstacles.empty());

    CHECK(cfg.gen.n_obstacles == 8);
    CHECK(cfg.gen.bounds.x_min == -2.0);
    CHECK(cfg.gen.bounds.y_max == 12.0);
    CHECK(cfg.gen.min_radius == 0.4);
    CHECK(cfg.gen.max_radius == 1.0);
    CHECK(cfg.gen.clearance == 0.5);
    CHECK(cfg.gen.inflation == 0.35);
    CHECK(cfg.gen.start.x == 0.0);
    CHECK(cfg.gen.goal.x == 10.0);
    CHECK(cfg.gen.goal.y == 10.0);

    CHECK(cfg.mpc.n_steps == 3);
    CHECK(cfg.mpc.step_duration == 0.4);
    CHECK(cfg.mpc.com_height == 1.0);
    CHECK(cfg.mpc.omega_max == 0.49008845396000775);
    CHECK(cfg.mpc.slack_penalty == 1e4);
    CHECK(cfg.mpc.control_regularization == 0.0);
    CHECK(cfg.mpc.qp_max_iterations == 200);
    CHECK(cfg.mpc.limits.v_x_min == -0.1);
    CHECK(cfg.mpc.limits.v_x_max == 0.8);
    CHECK(cfg.mpc.limits.v_y_min == 0.1);
    CHECK(cfg.mpc.limits.v_y_max == 0.4);
    CHECK(cfg.mpc.limits.l_max == 0.17320508075688773);
    CHECK(cfg.mpc.limits.alpha == 1.44);
    CHECK(cfg.mpc.barrier.gamma == 0.3);
    CHECK(cfg.mpc.barrier.active_radius == 4.0);

    CHECK(cfg.rrt.step_size == 0.5);
    CHECK(cfg.rrt.goal_bias == 0.1);
    CHECK(cfg.rrt.max_nodes == 5000);
    CHECK(cfg.rrt.goal_tolerance == 0.3);
    CHECK(cfg.rrt.seed == 1);
    CHECK(cfg.rrt.inflation == 0.35);

    CHECK(cfg.run.goal_tolerance == 0.3);
    CHECK(cfg.run.max_steps == 200);
    CHECK(cfg.run.lookahead == 1.5);
    CHECK(cfg.run.ticks_per_second == 1000);
    CHECK(cfg.run.replans_per_second == 20);
    CHECK(cfg.run.initial_heading == 0.0);
    CHECK(cfg.run.initial_stance == constraints::Foot::Right);
    CHECK(cfg.run.disturbance_velocity == 0.0);
    CHECK(cfg.run.disturbance_seed == 0);

    CHECK(cfg.log_path == "episode.ndjson");
    CHECK(cfg.svg_path.empty());
}

TEST_CASE("configs survive a serialize/parse round trip") {
    io::ScenarioConfig cfg;
    cfg.mode = sim::Mode::SubGoal;
    cfg.world_seed = 77;
    cfg.world_file = "my_world.json";
    cfg.inline_obstacles = {{{4.0, 4.0}, {5.0, 4.0}, {4.5, 5.25}}};
    cfg.gen.n_obstacles = 3;
    cfg.gen.bounds = {-1.5, -2.5, 9.5, 8.5};
    cfg.gen.min_radius = 0.3;
    cfg.gen.max_radius = 0.9;
    cfg.gen.clearance = 0.75;
    cfg.gen.inflation = 0.3;
    cfg.gen.start = {0.25, -0.125};
    cfg.gen.goal = {7.5, 6.5};
    cfg.mpc.n_steps = 4;
    cfg.mpc.step_duration = 0.5;
    cfg.mpc.com_height = 0.9;
    cfg.mpc.omega_max = 0.37;
    cfg.mpc.slack_penalty = 5e3;
    cfg.mpc.control_regularization = 0.01;
    cfg.mpc.qp_max_iterations = 123;
    cfg.mpc.limits.v_x_min = -0.05;
    cfg.mpc.limits.v_x_max = 0.7;
    cfg.mpc.limits.v_y_min = 0.12;
    cfg.mpc.limits.v_y_max = 0.38;
    cfg.mpc.limits.l_max = 0.19;
    cfg.mpc.limits.alpha = 3.6;
    cfg.mpc.barrier.gamma = 0.25;
    cfg.mpc.barrier.active_radius = 3.5;
    cfg.rrt.step_size = 0.4;
    cfg.rrt.goal_bias = 0.2;
    cfg.rrt.max_nodes = 900;
    cfg.rrt.goal_tolerance = 0.25;
    cfg.rrt.seed = 11;
    cfg.rrt.inflation = 0.3;
    cfg.run.goal_tolerance = 0.35;
    cfg.run.max_steps = 150;
    cfg.run.lookahead = 1.25;
    cfg.run.ticks_per_second = 500;
    cfg.run.replans_per_second = 10;
    cfg.run.initial_heading = -2.5;
    cfg.run.initial_stance = constraints::Foot::Left;
    cfg.run.disturbance_velocity = 0.001;
    cfg.run.disturbance_seed = 19;
    cfg.log_path = "out.ndjson";
    cfg.svg_path = "out.svg";

    const std::string text = io::serialize_config(cfg);
    const io::ScenarioConfig back = io::parse_config(text);

    CHECK(back.mode == cfg.mode);
    CHECK(back.world_seed == cfg.world_seed);
    CHECK(back.world_file == cfg.world_file);
    REQUIRE(back.inline_obstacles.size() == 1);
    REQUIRE(back.inline_obstacles[0].size() == 3);
    CHECK(back.inline_obstacles[0][2].y == 5.25);
    CHECK(back.gen.n_obstacles == cfg.gen.n_obstacles);
    CHECK(back.gen.bounds.x_min == cfg.gen.bounds.x_min);
    CHECK(back.gen.bounds.y_max == cfg.gen.bounds.y_max);
    CHECK(back.gen.min_radius == cfg.gen.min_radius);
    CHECK(back.gen.max_radius == cfg.gen.max_radius);
    CHECK(back.gen.clearance == cfg.gen.clearance);
    CHECK(back.gen.inflation == cfg.gen.inflation);
    CHECK(back.gen.start.x == cfg.gen.start.x);
    CHECK(back.gen.goal.y == cfg.gen.goal.y);
    CHECK(back.mpc.n_steps == cfg.mpc.n_steps);
    CHECK(back.mpc.step_duration == cfg.mpc.step_duration);
    CHECK(back.mpc.com_height == cfg.mpc.com_height);
    CHECK(back.mpc.omega_max == cfg.mpc.omega_max);
    CHECK(back.mpc.slack_penalty == cfg.mpc.slack_penalty);
    CHECK(back.mpc.control_regularization == cfg.mpc.control_regularization);
    CHECK(back.mpc.qp_max_iterations == cfg.mpc.qp_max_iterations);
    CHECK(back.mpc.limits.v_x_min == cfg.mpc.limits.v_x_min);
    CHECK(back.mpc.limits.v_x_max == cfg.mpc.limits.v_x_max);
    CHECK(back.mpc.limits.v_y_min == cfg.mpc.limits.v_y_min);
    CHECK(back.mpc.limits.v_y_max == cfg.mpc.limits.v_y_max);
    CHECK(back.mpc.limits.l_max == cfg.mpc.limits.l_max);
    CHECK(back.mpc.limits.alpha == cfg.mpc.limits.alpha);
    CHECK(back.mpc.barrier.gamma == cfg.mpc.barrier.gamma);
    CHECK(back.mpc.barrier.active_radius == cfg.mpc.barrier.active_radius);
    CHECK(back.rrt.step_size == cfg.rrt.step_size);
    CHECK(back.rrt.goal_bias == cfg.rrt.goal_bias);
    CHECK(back.rrt.max_nodes == cfg.rrt.max_nodes);
    CHECK(back.rrt.goal_tolerance == cfg.rrt.goal_tolerance);
    CHECK(back.rrt.seed == cfg.rrt.seed);
    CHECK(back.rrt.inflation == cfg.rrt.inflation);
    CHECK(back.run.goal_tolerance == cfg.run.goal_tolerance);
    CHECK(back.run.max_steps == cfg.run.max_steps);
    CHECK(back.run.lookahead == cfg.run.lookahead);
    CHECK(back.run.ticks_per_second == cfg.run.ticks_per_second);
    CHECK(back.run.replans_per_second == cfg.run.replans_per_second);
    CHECK(back.run.initial_heading == cfg.run.initial_heading);
    CHECK(back.run.initial_stance == cfg.run.initial_stance);
    CHECK(back.run.disturbance_velocity == cfg.run.disturbance_velocity);
    CHECK(back.run.disturbance_seed == cfg.run.disturbance_seed);
    CHECK(back.log_path == cfg.log_path);
    CHECK(back.svg_path == cfg.svg_path);

    // Serialization is a fixed point after one round trip.
    CHECK(io::serialize_config(back) == text);
}

TEST_CASE("schema violations carry the full field path") {
    CHECK_THROWS_WITH_AS(io::parse_config(R"({"wat": 1})"), "config.wat: unknown key",
                         io::ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config(R"({"mpc": {"limits": {"bogus": 1}}})"),
                         "mpc.limits.bogus: unknown key", io::ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config(R"({"mpc": {"horizon_steps": "three"}})"),
                         "mpc.horizon_steps: expected an integer", io::ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config(R"({"mode": "diagonal"})"),
                         "config.mode: expected \"global\" or \"subgoal\"", io::ConfigError);
    CHECK_THROWS_WITH_AS(io::parse_config(R"({"world": {"seed": -5}})"),
                         "world.seed: expected a nonnegative integer", io::ConfigError);
    CHECK_THROWS_AS(io::parse_config(R"({"world": {"obstacles": [[0, 0, 1, 0]]}})"),
                    io::ConfigError);
    CHECK_THROWS_AS(io::parse_config("{nope"), io::ConfigError);
}

TEST_CASE("worlds round trip through their JSON form") {
    const sim::World world = sim::generate_environment(5, sim::GenParams{});
    const std::string text = io::serialize_world(world);
    const sim::World back = io::parse_world(text);

    CHECK(back.seed == world.seed);
    CHECK(back.inflation == world.inflation);
    CHECK(back.bounds.x_min == world.bounds.x_min);
    CHECK(back.bounds.y_max == world.bounds.y_max);
    CHECK(back.start.x == world.start.x);
    CHECK(back.goal.y == world.goal.y);
    REQUIRE(back.obstacles.size() == world.obstacles.size());
    REQUIRE(back.inflated_obstacles.size() == world.inflated_obstacles.size());
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        REQUIRE(back.obstacles[i].size() == world.obstacles[i].size());
        for (std::size_t v = 0; v < world.obstacles[i].size(); ++v) {
            CHECK(back.obstacles[i].vertex(v).x == world.obstacles[i].vertex(v).x);
            CHECK(back.obstacles[i].vertex(v).y == world.obstacles[i].vertex(v).y);
        }
        // The inflated planner copies are rebuilt identically from the
        // 17-digit vertices.
        REQUIRE(back.inflated_obstacles[i].size() == world.inflated_obstacles[i].size());
        for (std::size_t v = 0; v < world.inflated_obstacles[i].size(); ++v) {
            CHECK(back.inflated_obstacles[i].vertex(v).x == world.inflated_obstacles[i].vertex(v).x);
            CHECK(back.inflated_obstacles[i].vertex(v).y == world.inflated_obstacles[i].vertex(v).y);
        }
    }
    CHECK(io::serialize_world(back) == text);

    io::write_world("test_io_world.json", world);
    const sim::World loaded = io::load_world("test_io_world.json");
    CHECK(loaded.seed == world.seed);
    CHECK(io::serialize_world(loaded) == text);

    CHECK_THROWS_AS(io::load_world("does_not_exist_xyz.json"), io::IoError);
    CHECK_THROWS_AS(io::parse_world(R"({"bogus": 1})"), io::ConfigError);
}

TEST_CASE("world_from_config picks file, inline, or generated sources") {
    SUBCASE("generated by default, matching the generator exactly") {
        io::ScenarioConfig cfg;
        cfg.world_seed = 5;
        const sim::World a = io::world_from_config(cfg);
        const sim::World b = sim::generate_environment(5, cfg.gen);
        REQUIRE(a.obstacles.size() == b.obstacles.size());
        for (std::size_t i = 0; i < a.obstacles.size(); ++i) {
            CHECK(a.obstacles[i].vertex(0).x == b.obstacles[i].vertex(0).x);
        }
    }
    SUBCASE("inline obstacles build verbatim") {
        io::ScenarioConfig cfg;
        cfg.inline_obstacles = {{{4.0, 4.0}, {5.0, 4.0}, {4.5, 5.0}}};
        const sim::World w = io::world_from_config(cfg);
        REQUIRE(w.obstacles.size() == 1);
        CHECK(w.obstacles[0].size() == 3);
        CHECK(w.inflated_obstacles.size() == 1);
        CHECK(w.seed == cfg.world_seed);
    }
    SUBCASE("a start swallowed by inflation is rejected") {
        io::ScenarioConfig cfg;
        cfg.inline_obstacles = {{{0.1, -1.0}, {2.0, -1.0}, {2.0, 1.0}, {0.1, 1.0}}};
        // start (0, 0) is 0.1 m from the raw obstacle, inside the 0.35 band
        CHECK_THROWS_AS(io::world_from_config(cfg), io::ConfigError);
    }
    SUBCASE("an explicit file wins over inline obstacles") {
        const sim::World world = sim::generate_environment(6, sim::GenParams{});
        io::write_world("test_io_world2.json", world);
        io::ScenarioConfig cfg;
        cfg.world_file = "test_io_world2.json";
        cfg.inline_obstacles = {{{4.0, 4.0}, {5.0, 4.0}, {4.5, 5.0}}};
        const sim::World w = io::world_from_config(cfg);
        CHECK(w.seed == 6);
        CHECK(w.obstacles.size() == world.obstacles.size());
    }
}

TEST_CASE("step lines have a frozen, wall-clock-free shape") {
    sim::StepRecord rec;
    rec.step_index = 3;
    rec.stance = constraints::Foot::Left;
    rec.control = {0.5, -0.25, 0.0};
    rec.state_begin = {0.0, 0.5, 1.0, -0.5, 0.25};
    rec.state_end = {2.0, 0.75, -1.5, 0.125, -0.5};
    rec.completed = true;
    rec.heading_ref = 0.25;
    rec.s_v = -1.0;
    rec.sim_time_begin = 1.5;
    CHECK(io::step_line(rec) ==
          "{\"type\": \"step\", \"step\": 3, \"stance\": \"left\", "
          "\"control\": [0.5, -0.25, 0], "
          "\"state_begin\": [0, 0.5, 1, -0.5, 0.25], "
          "\"state_end\": [2, 0.75, -1.5, 0.125, -0.5], "
          "\"completed\": true, \"heading_ref\": 0.25, \"s_v\": -1, "
          "\"sim_time_begin\": 1.5}\n");
}

TEST_CASE("episode logs round trip through NDJSON") {
    sim::World w;
    w.bounds = {-2, -2, 12, 12};
    w.start = {0, 0};
    w.goal = {2.0, 0.5};
    w.seed = 13;
    const sim::EpisodeLog log =
        sim::run_episode(w, sim::Mode::SubGoal, mpc::MpcParams{}, rrt::RrtParams{}, sim::RunParams{});
    REQUIRE(log.outcome == sim::Outcome::GoalReached);

    const std::string text = io::serialize_episode(w, log);
    const io::LoadedEpisode back = io::parse_episode(text);

    CHECK(back.log.outcome == log.outcome);
    CHECK(back.log.mode == log.mode);
    CHECK(back.log.world_seed == log.world_seed);
    CHECK(back.log.steps == log.steps);
    CHECK(back.log.sim_seconds == log.sim_seconds);
    CHECK(back.log.wall_seconds == log.wall_seconds);
    CHECK(back.log.fault_message == log.fault_message);
    CHECK(back.log.violation_obstacle == log.violation_obstacle);
    CHECK(back.world.goal.x == w.goal.x);
    REQUIRE(back.log.subgoal_path.waypoints.size() == log.subgoal_path.waypoints.size());

    REQUIRE(back.log.ticks.size() == log.ticks.size());
    for (std::size_t i = 0; i < log.ticks.size(); i += 97) {
        CHECK(back.log.ticks[i].tick == log.ticks[i].tick);
        CHECK(same_state(back.log.ticks[i].state, log.ticks[i].state));
    }
    REQUIRE(back.log.replans.size() == log.replans.size());
    for (std::size_t i = 0; i < log.replans.size(); ++i) {
        CHECK(back.log.replans[i].tick == log.replans[i].tick);
        CHECK(same_state(back.log.replans[i].x0, log.replans[i].x0));
        CHECK(back.log.replans[i].status == log.replans[i].status);
        CHECK(back.log.replans[i].committed == log.replans[i].committed);
        CHECK(back.log.replans[i].objective == log.replans[i].objective);
        REQUIRE(back.log.replans[i].controls.size() == log.replans[i].controls.size());
        for (std::size_t k = 0; k < log.replans[i].controls.size(); ++k) {
            CHECK(back.log.replans[i].controls[k].f_x == log.replans[i].controls[k].f_x);
            CHECK(back.log.replans[i].controls[k].omega == log.replans[i].controls[k].omega);
        }
    }
    REQUIRE(back.log.step_records.size() == log.step_records.size());
    for (std::size_t i = 0; i < log.step_records.size(); ++i) {
        const sim::StepRecord& a = log.step_records[i];
        const sim::StepRecord& b = back.log.step_records[i];
        CHECK(b.step_index == a.step_index);
        CHECK(b.stance == a.stance);
        CHECK(b.control.f_x == a.control.f_x);
        CHECK(b.control.f_y == a.control.f_y);
        CHECK(b.control.omega == a.control.omega);
        CHECK(same_state(b.state_begin, a.state_begin));
        CHECK(same_state(b.state_end, a.state_end));
        CHECK(b.completed == a.completed);
        CHECK(b.heading_ref == a.heading_ref);
        CHECK(b.s_v == a.s_v);
        CHECK(b.sim_time_begin == a.sim_time_begin);
    }

    // Re-serializing the parsed episode reproduces the bytes.
    CHECK(io::serialize_episode(back.world, back.log) == text);

    io::write_episode("test_io_episode.ndjson", w, log);
    const io::LoadedEpisode loaded = io::load_episode("test_io_episode.ndjson");
    CHECK(io::serialize_episode(loaded.world, loaded.log) == text);
}

TEST_CASE("episode parsing rejects broken input") {
    CHECK_THROWS_AS(io::parse_episode("{\"type\": \"meta\", \"mode\": \"global\"}\n"),
                    io::ConfigError);  // no world record
    CHECK_THROWS_AS(io::parse_episode("{\"type\": \"gibberish\"}\n"), io::ConfigError);
    CHECK_THROWS_AS(io::parse_episode("not json\n"), io::ConfigError);
    CHECK_THROWS_AS(io::load_episode("no_such_episode.ndjson"), io::IoError);
}

TEST_CASE("fault messages survive escaping") {
    sim::World w;
    w.bounds = {-1, -1, 1, 1};
    w.seed = 2;
    sim::EpisodeLog log;
    log.outcome = sim::Outcome::SolverFault;
    log.fault_message = "quote \" backslash \\ newline \n tab \t done";
    const io::LoadedEpisode back = io::parse_episode(io::serialize_episode(w, log));
    CHECK(back.log.fault_message == log.fault_message);
}
