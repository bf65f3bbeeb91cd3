#include "lipnav/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace lipnav::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(path + "." + it.key(), "unknown key");
        }
    }
}

double get_double(const json& j, const std::string& path, const char* key, double def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        fail(path + "." + key, "expected a number");
    }
    return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    return v.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& path, const char* key, std::uint64_t def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
        fail(path + "." + key, "expected a nonnegative integer");
    }
    if (v.is_number_integer() && v.get<long long>() < 0) {
        fail(path + "." + key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path, const char* key,
                       const std::string& def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

geom::Point2 get_point(const json& j, const std::string& path, const char* key, geom::Point2 def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(path + "." + key, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

geom::Rect get_rect(const json& j, const std::string& path, const char* key, geom::Rect def) {
    if (!j.contains(key)) {
        return def;
    }
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 4) {
        fail(path + "." + key, "expected [x_min, y_min, x_max, y_max]");
    }
    for (const json& e : v) {
        if (!e.is_number()) {
            fail(path + "." + key, "expected [x_min, y_min, x_max, y_max]");
        }
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
}

std::vector<std::vector<geom::Point2>> get_obstacle_lists(const json& j, const std::string& path,
                                                          const char* key) {
    std::vector<std::vector<geom::Point2>> out;
    if (!j.contains(key)) {
        return out;
    }
    const json& v = j.at(key);
    if (!v.is_array()) {
        fail(path + "." + key, "expected an array of flat coordinate arrays");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& arr = v[static_cast<int>(i)];
        const std::string here = path + "." + key + "[" + std::to_string(i) + "]";
        if (!arr.is_array() || arr.size() < 6 || arr.size() % 2 != 0) {
            fail(here, "expected a flat [x0, y0, x1, y1, ...] array of at least 3 vertices");
        }
        std::vector<geom::Point2> poly;
        poly.reserve(arr.size() / 2);
        for (std::size_t k = 0; k + 1 < arr.size(); k += 2) {
            if (!arr[static_cast<int>(k)].is_number() || !arr[static_cast<int>(k + 1)].is_number()) {
                fail(here, "vertex coordinates must be numbers");
            }
            poly.push_back({arr[static_cast<int>(k)].get<double>(),
                            arr[static_cast<int>(k + 1)].get<double>()});
        }
        out.push_back(std::move(poly));
    }
    return out;
}

sim::Mode parse_mode(const json& j, const std::string& path, const char* key, sim::Mode def) {
    const std::string s = get_string(j, path, key, sim::to_string(def));
    if (s == "global") {
        return sim::Mode::GlobalGoal;
    }
    if (s == "subgoal") {
        return sim::Mode::SubGoal;
    }
    fail(path + "." + key, "expected \"global\" or \"subgoal\"");
}

constraints::Foot parse_stance(const json& j, const std::string& path, const char* key,
                               constraints::Foot def) {
    const std::string s =
        get_string(j, path, key, def == constraints::Foot::Left ? "left" : "right");
    if (s == "left") {
        return constraints::Foot::Left;
    }
    if (s == "right") {
        return constraints::Foot::Right;
    }
    fail(path + "." + key, "expected \"left\" or \"right\"");
}

void append_poly_flat(std::string& out, const std::vector<geom::Point2>& poly) {
    out += "[";
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += format_double(poly[i].x) + ", " + format_double(poly[i].y);
    }
    out += "]";
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failure: " + path);
    }
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failure: " + path);
    }
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    check_keys(j, "config", {"mode", "world", "mpc", "rrt", "run", "output"});
    cfg.mode = parse_mode(j, "config", "mode", cfg.mode);

    if (j.contains("world")) {
        const json& w = j.at("world");
        check_keys(w, "world",
                   {"seed", "n_obstacles", "bounds_m", "start_m", "goal_m",
                    "obstacle_radius_range_m", "clearance_m", "inflation_m", "file", "obstacles"});
        cfg.world_seed = get_u64(w, "world", "seed", cfg.world_seed);
        cfg.gen.n_obstacles = get_int(w, "world", "n_obstacles", cfg.gen.n_obstacles);
        cfg.gen.bounds = get_rect(w, "world", "bounds_m", cfg.gen.bounds);
        cfg.gen.start = get_point(w, "world", "start_m", cfg.gen.start);
        cfg.gen.goal = get_point(w, "world", "goal_m", cfg.gen.goal);
        if (w.contains("obstacle_radius_range_m")) {
            const json& rr = w.at("obstacle_radius_range_m");
            if (!rr.is_array() || rr.size() != 2 || !rr[0].is_number() || !rr[1].is_number()) {
                fail("world.obstacle_radius_range_m", "expected [min, max]");
            }
            cfg.gen.min_radius = rr[0].get<double>();
            cfg.gen.max_radius = rr[1].get<double>();
        }
        cfg.gen.clearance = get_double(w, "world", "clearance_m", cfg.gen.clearance);
        cfg.gen.inflation = get_double(w, "world", "inflation_m", cfg.gen.inflation);
        cfg.world_file = get_string(w, "world", "file", cfg.world_file);
        cfg.inline_obstacles = get_obstacle_lists(w, "world", "obstacles");
    }

    if (j.contains("mpc")) {
        const json& m = j.at("mpc");
        check_keys(m, "mpc",
                   {"horizon_steps", "step_duration_s", "com_height_m", "omega_max_rad_s",
                    "slack_penalty", "control_regularization", "qp_max_iterations", "limits",
                    "barrier"});
        cfg.mpc.n_steps = get_int(m, "mpc", "horizon_steps", cfg.mpc.n_steps);
        cfg.mpc.step_duration = get_double(m, "mpc", "step_duration_s", cfg.mpc.step_duration);
        cfg.mpc.com_height = get_double(m, "mpc", "com_height_m", cfg.mpc.com_height);
        cfg.mpc.omega_max = get_double(m, "mpc", "omega_max_rad_s", cfg.mpc.omega_max);
        cfg.mpc.slack_penalty = get_double(m, "mpc", "slack_penalty", cfg.mpc.slack_penalty);
        cfg.mpc.control_regularization =
            get_double(m, "mpc", "control_regularization", cfg.mpc.control_regularization);
        cfg.mpc.qp_max_iterations = get_int(m, "mpc", "qp_max_iterations", cfg.mpc.qp_max_iterations);
        if (m.contains("limits")) {
            const json& l = m.at("limits");
            check_keys(l, "mpc.limits",
                       {"v_x_min_m_s", "v_x_max_m_s", "v_y_min_m_s", "v_y_max_m_s", "l_max_m",
                        "alpha"});
            cfg.mpc.limits.v_x_min = get_double(l, "mpc.limits", "v_x_min_m_s", cfg.mpc.limits.v_x_min);
            cfg.mpc.limits.v_x_max = get_double(l, "mpc.limits", "v_x_max_m_s", cfg.mpc.limits.v_x_max);
            cfg.mpc.limits.v_y_min = get_double(l, "mpc.limits", "v_y_min_m_s", cfg.mpc.limits.v_y_min);
            cfg.mpc.limits.v_y_max = get_double(l, "mpc.limits", "v_y_max_m_s", cfg.mpc.limits.v_y_max);
            cfg.mpc.limits.l_max = get_double(l, "mpc.limits", "l_max_m", cfg.mpc.limits.l_max);
            cfg.mpc.limits.alpha = get_double(l, "mpc.limits", "alpha", cfg.mpc.limits.alpha);
        }
        if (m.contains("barrier")) {
            const json& b = m.at("barrier");
            check_keys(b, "mpc.barrier", {"gamma", "active_radius_m"});
            cfg.mpc.barrier.gamma = get_double(b, "mpc.barrier", "gamma", cfg.mpc.barrier.gamma);
            cfg.mpc.barrier.active_radius =
                get_double(b, "mpc.barrier", "active_radius_m", cfg.mpc.barrier.active_radius);
        }
    }

    if (j.contains("rrt")) {
        const json& r = j.at("rrt");
        check_keys(r, "rrt",
                   {"step_size_m", "goal_bias", "max_nodes", "goal_tolerance_m", "seed",
                    "inflation_m"});
        cfg.rrt.step_size = get_double(r, "rrt", "step_size_m", cfg.rrt.step_size);
        cfg.rrt.goal_bias = get_double(r, "rrt", "goal_bias", cfg.rrt.goal_bias);
        cfg.rrt.max_nodes = get_int(r, "rrt", "max_nodes", cfg.rrt.max_nodes);
        cfg.rrt.goal_tolerance = get_double(r, "rrt", "goal_tolerance_m", cfg.rrt.goal_tolerance);
        cfg.rrt.seed = get_u64(r, "rrt", "seed", cfg.rrt.seed);
        cfg.rrt.inflation = get_double(r, "rrt", "inflation_m", cfg.rrt.inflation);
    }

    if (j.contains("run")) {
        const json& r = j.at("run");
        check_keys(r, "run",
                   {"goal_tolerance_m", "max_steps", "lookahead_m", "ticks_per_second",
                    "replans_per_second", "initial_heading_rad", "initial_stance",
                    "disturbance_velocity_m_s", "disturbance_seed"});
        cfg.run.goal_tolerance = get_double(r, "run", "goal_tolerance_m", cfg.run.goal_tolerance);
        cfg.run.max_steps = get_int(r, "run", "max_steps", cfg.run.max_steps);
        cfg.run.lookahead = get_double(r, "run", "lookahead_m", cfg.run.lookahead);
        cfg.run.ticks_per_second = get_int(r, "run", "ticks_per_second", cfg.run.ticks_per_second);
        cfg.run.replans_per_second =
            get_int(r, "run", "replans_per_second", cfg.run.replans_per_second);
        cfg.run.initial_heading =
            get_double(r, "run", "initial_heading_rad", cfg.run.initial_heading);
        cfg.run.initial_stance = parse_stance(r, "run", "initial_stance", cfg.run.initial_stance);
        cfg.run.disturbance_velocity =
            get_double(r, "run", "disturbance_velocity_m_s", cfg.run.disturbance_velocity);
        cfg.run.disturbance_seed = get_u64(r, "run", "disturbance_seed", cfg.run.disturbance_seed);
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, "output", {"log", "svg"});
        cfg.log_path = get_string(o, "output", "log", cfg.log_path);
        cfg.svg_path = get_string(o, "output", "svg", cfg.svg_path);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    try {
        return parse_config(read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string s;
    s += "{\n";
    s += "  \"mode\": \"" + std::string(sim::to_string(cfg.mode)) + "\",\n";
    s += "  \"world\": {\n";
    s += "    \"seed\": " + std::to_string(cfg.world_seed) + ",\n";
    s += "    \"n_obstacles\": " + std::to_string(cfg.gen.n_obstacles) + ",\n";
    s += "    \"bounds_m\": [" + format_double(cfg.gen.bounds.x_min) + ", " +
         format_double(cfg.gen.bounds.y_min) + ", " + format_double(cfg.gen.bounds.x_max) + ", " +
         format_double(cfg.gen.bounds.y_max) + "],\n";
    s += "    \"start_m\": [" + format_double(cfg.gen.start.x) + ", " +
         format_double(cfg.gen.start.y) + "],\n";
    s += "    \"goal_m\": [" + format_double(cfg.gen.goal.x) + ", " + format_double(cfg.gen.goal.y) +
         "],\n";
    s += "    \"obstacle_radius_range_m\": [" + format_double(cfg.gen.min_radius) + ", " +
         format_double(cfg.gen.max_radius) + "],\n";
    s += "    \"clearance_m\": " + format_double(cfg.gen.clearance) + ",\n";
    s += "    \"inflation_m\": " + format_double(cfg.gen.inflation);
    if (!cfg.world_file.empty()) {
        s += ",\n    \"file\": \"" + cfg.world_file + "\"";
    }
    if (!cfg.inline_obstacles.empty()) {
        s += ",\n    \"obstacles\": [";
        for (std::size_t i = 0; i < cfg.inline_obstacles.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            append_poly_flat(s, cfg.inline_obstacles[i]);
        }
        s += "]";
    }
    s += "\n  },\n";
    s += "  \"mpc\": {\n";
    s += "    \"horizon_steps\": " + std::to_string(cfg.mpc.n_steps) + ",\n";
    s += "    \"step_duration_s\": " + format_double(cfg.mpc.step_duration) + ",\n";
    s += "    \"com_height_m\": " + format_double(cfg.mpc.com_height) + ",\n";
    s += "    \"omega_max_rad_s\": " + format_double(cfg.mpc.omega_max) + ",\n";
    s += "    \"slack_penalty\": " + format_double(cfg.mpc.slack_penalty) + ",\n";
    s += "    \"control_regularization\": " + format_double(cfg.mpc.control_regularization) + ",\n";
    s += "    \"qp_max_iterations\": " + std::to_string(cfg.mpc.qp_max_iterations) + ",\n";
    s += "    \"limits\": {\n";
    s += "      \"v_x_min_m_s\": " + format_double(cfg.mpc.limits.v_x_min) + ",\n";
    s += "      \"v_x_max_m_s\": " + format_double(cfg.mpc.limits.v_x_max) + ",\n";
    s += "      \"v_y_min_m_s\": " + format_double(cfg.mpc.limits.v_y_min) + ",\n";
    s += "      \"v_y_max_m_s\": " + format_double(cfg.mpc.limits.v_y_max) + ",\n";
    s += "      \"l_max_m\": " + format_double(cfg.mpc.limits.l_max) + ",\n";
    s += "      \"alpha\": " + format_double(cfg.mpc.limits.alpha) + "\n";
    s += "    },\n";
    s += "    \"barrier\": {\n";
    s += "      \"gamma\": " + format_double(cfg.mpc.barrier.gamma) + ",\n";
    s += "      \"active_radius_m\": " + format_double(cfg.mpc.barrier.active_radius) + "\n";
    s += "    }\n";
    s += "  },\n";
    s += "  \"rrt\": {\n";
    s += "    \"step_size_m\": " + format_double(cfg.rrt.step_size) + ",\n";
    s += "    \"goal_bias\": " + format_double(cfg.rrt.goal_bias) + ",\n";
    s += "    \"max_nodes\": " + std::to_string(cfg.rrt.max_nodes) + ",\n";
    s += "    \"goal_tolerance_m\": " + format_double(cfg.rrt.goal_tolerance) + ",\n";
    s += "    \"seed\": " + std::to_string(cfg.rrt.seed) + ",\n";
    s += "    \"inflation_m\": " + format_double(cfg.rrt.inflation) + "\n";
    s += "  },\n";
    s += "  \"run\": {\n";
    s += "    \"goal_tolerance_m\": " + format_double(cfg.run.goal_tolerance) + ",\n";
    s += "    \"max_steps\": " + std::to_string(cfg.run.max_steps) + ",\n";
    s += "    \"lookahead_m\": " + format_double(cfg.run.lookahead) + ",\n";
    s += "    \"ticks_per_second\": " + std::to_string(cfg.run.ticks_per_second) + ",\n";
    s += "    \"replans_per_second\": " + std::to_string(cfg.run.replans_per_second) + ",\n";
    s += "    \"initial_heading_rad\": " + format_double(cfg.run.initial_heading) + ",\n";
    s += "    \"initial_stance\": \"" +
         std::string(cfg.run.initial_stance == constraints::Foot::Left ? "left" : "right") + "\",\n";
    s += "    \"disturbance_velocity_m_s\": " + format_double(cfg.run.disturbance_velocity) + ",\n";
    s += "    \"disturbance_seed\": " + std::to_string(cfg.run.disturbance_seed) + "\n";
    s += "  },\n";
    s += "  \"output\": {\n";
    s += "    \"log\": \"" + cfg.log_path + "\",\n";
    s += "    \"svg\": \"" + cfg.svg_path + "\"\n";
    s += "  }\n";
    s += "}\n";
    return s;
}

sim::World world_from_config(const ScenarioConfig& cfg) {
    if (!cfg.world_file.empty()) {
        return load_world(cfg.world_file);
    }
    if (!cfg.inline_obstacles.empty()) {
        sim::World world;
        world.bounds = cfg.gen.bounds;
        world.start = cfg.gen.start;
        world.goal = cfg.gen.goal;
        world.seed = cfg.world_seed;
        world.inflation = cfg.gen.inflation;
        for (std::size_t i = 0; i < cfg.inline_obstacles.size(); ++i) {
            try {
                geom::ConvexPolygon poly(cfg.inline_obstacles[i]);
                world.inflated_obstacles.push_back(
                    world.inflation > 0.0 ? geom::inflate(poly, world.inflation) : poly);
                world.obstacles.push_back(std::move(poly));
            } catch (const std::exception& e) {
                throw ConfigError("world.obstacles[" + std::to_string(i) + "]: " + e.what());
            }
        }
        for (const geom::ConvexPolygon& poly : world.inflated_obstacles) {
            if (geom::point_in_polygon(poly, world.start)) {
                throw ConfigError("world.start_m: inside an inflated obstacle");
            }
            if (geom::point_in_polygon(poly, world.goal)) {
                throw ConfigError("world.goal_m: inside an inflated obstacle");
            }
        }
        return world;
    }
    return sim::generate_environment(cfg.world_seed, cfg.gen);
}

std::string serialize_world(const sim::World& world) {
    std::string s;
    s += "{\n";
    s += "  \"seed\": " + std::to_string(world.seed) + ",\n";
    s += "  \"inflation_m\": " + format_double(world.inflation) + ",\n";
    s += "  \"bounds_m\": [" + format_double(world.bounds.x_min) + ", " +
         format_double(world.bounds.y_min) + ", " + format_double(world.bounds.x_max) + ", " +
         format_double(world.bounds.y_max) + "],\n";
    s += "  \"start_m\": [" + format_double(world.start.x) + ", " + format_double(world.start.y) +
         "],\n";
    s += "  \"goal_m\": [" + format_double(world.goal.x) + ", " + format_double(world.goal.y) +
         "],\n";
    s += "  \"obstacles\": [";
    for (std::size_t i = 0; i < world.obstacles.size(); ++i) {
        if (i > 0) {
            s += ",";
        }
        s += "\n    ";
        append_poly_flat(s, world.obstacles[i].vertices());
    }
    s += world.obstacles.empty() ? "]\n" : "\n  ]\n";
    s += "}\n";
    return s;
}

sim::World parse_world(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("world: invalid JSON: ") + e.what());
    }
    check_keys(j, "world", {"seed", "inflation_m", "bounds_m", "start_m", "goal_m", "obstacles"});
    sim::World world;
    world.seed = get_u64(j, "world", "seed", 0);
    world.inflation = get_double(j, "world", "inflation_m", 0.35);
    world.bounds = get_rect(j, "world", "bounds_m", {-2.0, -2.0, 12.0, 12.0});
    world.start = get_point(j, "world", "start_m", {0.0, 0.0});
    world.goal = get_point(j, "world", "goal_m", {10.0, 10.0});
    const auto lists = get_obstacle_lists(j, "world", "obstacles");
    for (std::size_t i = 0; i < lists.size(); ++i) {
        try {
            geom::ConvexPolygon poly(lists[i]);
            world.inflated_obstacles.push_back(
                world.inflation > 0.0 ? geom::inflate(poly, world.inflation) : poly);
            world.obstacles.push_back(std::move(poly));
        } catch (const std::exception& e) {
            throw ConfigError("world.obstacles[" + std::to_string(i) + "]: " + e.what());
        }
    }
    return world;
}

void write_world(const std::string& path, const sim::World& world) {
    write_text_file(path, serialize_world(world));
}

sim::World load_world(const std::string& path) {
    try {
        return parse_world(read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace lipnav::io
