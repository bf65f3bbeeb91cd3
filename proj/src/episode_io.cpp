#include "lipnav/episode_io.hpp"

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace lipnav::io {

namespace {

using nlohmann::json;

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

std::string state_array(const lip::LipState& x) {
    return "[" + format_double(x.p_x) + ", " + format_double(x.v_x) + ", " + format_double(x.p_y) +
           ", " + format_double(x.v_y) + ", " + format_double(x.theta) + "]";
}

std::string control_array(const lip::LipControl& u) {
    return "[" + format_double(u.f_x) + ", " + format_double(u.f_y) + ", " +
           format_double(u.omega) + "]";
}

std::string point_array(geom::Point2 p) {
    return "[" + format_double(p.x) + ", " + format_double(p.y) + "]";
}

const char* status_name(qp::Status s) {
    switch (s) {
        case qp::Status::Optimal: return "optimal";
        case qp::Status::Infeasible: return "infeasible";
        case qp::Status::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

qp::Status status_from(const std::string& s, const std::string& where) {
    if (s == "optimal") {
        return qp::Status::Optimal;
    }
    if (s == "infeasible") {
        return qp::Status::Infeasible;
    }
    if (s == "max_iterations") {
        return qp::Status::MaxIterations;
    }
    throw ConfigError(where + ": unknown status \"" + s + "\"");
}

lip::LipState state_from(const json& a, const std::string& where) {
    if (!a.is_array() || a.size() != 5) {
        throw ConfigError(where + ": expected a 5-element state array");
    }
    lip::LipState x;
    x.p_x = a[0].get<double>();
    x.v_x = a[1].get<double>();
    x.p_y = a[2].get<double>();
    x.v_y = a[3].get<double>();
    x.theta = a[4].get<double>();
    return x;
}

lip::LipControl control_from(const json& a, const std::string& where) {
    if (!a.is_array() || a.size() != 3) {
        throw ConfigError(where + ": expected a 3-element control array");
    }
    lip::LipControl u;
    u.f_x = a[0].get<double>();
    u.f_y = a[1].get<double>();
    u.omega = a[2].get<double>();
    return u;
}

geom::Point2 point_from(const json& a, const std::string& where) {
    if (!a.is_array() || a.size() != 2) {
        throw ConfigError(where + ": expected [x, y]");
    }
    return {a[0].get<double>(), a[1].get<double>()};
}

}  // namespace

std::string step_line(const sim::StepRecord& rec) {
    std::string s = "{\"type\": \"step\"";
    s += ", \"step\": " + std::to_string(rec.step_index);
    s += ", \"stance\": \"";
    s += rec.stance == constraints::Foot::Left ? "left" : "right";
    s += "\", \"control\": " + control_array(rec.control);
    s += ", \"state_begin\": " + state_array(rec.state_begin);
    s += ", \"state_end\": " + state_array(rec.state_end);
    s += ", \"completed\": ";
    s += rec.completed ? "true" : "false";
    s += ", \"heading_ref\": " + format_double(rec.heading_ref);
    s += ", \"s_v\": " + format_double(rec.s_v);
    s += ", \"sim_time_begin\": " + format_double(rec.sim_time_begin);
    s += "}\n";
    return s;
}

std::string serialize_episode(const sim::World& world, const sim::EpisodeLog& log) {
    std::string s;
    s += "{\"type\": \"meta\", \"mode\": \"";
    s += sim::to_string(log.mode);
    s += "\", \"world_seed\": " + std::to_string(log.world_seed) + "}\n";

    {
        // Embedded world, flattened onto one line.
        std::string w = serialize_world(world);
        std::string flat;
        flat.reserve(w.size());
        for (const char ch : w) {
            if (ch == '\n') {
                continue;
            }
            if (ch == ' ' && !flat.empty() && (flat.back() == ' ' || flat.back() == '[')) {
                continue;
            }
            flat += ch;
        }
        s += "{\"type\": \"world\", \"world\": " + flat + "}\n";
    }

    if (!log.subgoal_path.waypoints.empty()) {
        s += "{\"type\": \"path\", \"points\": [";
        for (std::size_t i = 0; i < log.subgoal_path.waypoints.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            s += point_array(log.subgoal_path.waypoints[i]);
        }
        s += "]}\n";
    }

    for (const sim::TickRecord& t : log.ticks) {
        s += "{\"type\": \"tick\", \"tick\": " + std::to_string(t.tick) +
             ", \"state\": " + state_array(t.state) + "}\n";
    }

    for (const sim::ReplanRecord& r : log.replans) {
        s += "{\"type\": \"replan\", \"tick\": " + std::to_string(r.tick);
        s += ", \"x0\": " + state_array(r.x0);
        s += ", \"target\": " + point_array(r.target);
        s += ", \"half_spaces\": [";
        for (std::size_t i = 0; i < r.half_spaces.size(); ++i) {
            const sim::HalfSpaceRecord& h = r.half_spaces[i];
            if (i > 0) {
                s += ", ";
            }
            s += "{\"obstacle\": " + std::to_string(h.obstacle);
            s += ", \"eta\": [" + format_double(h.eta_x) + ", " + format_double(h.eta_y) + "]";
            s += ", \"c\": [" + format_double(h.c_x) + ", " + format_double(h.c_y) + "]}";
        }
        s += "], \"predicted\": [";
        for (std::size_t i = 0; i < r.predicted.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            s += state_array(r.predicted[i]);
        }
        s += "], \"controls\": [";
        for (std::size_t i = 0; i < r.controls.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            s += control_array(r.controls[i]);
        }
        s += "], \"status\": \"";
        s += status_name(r.status);
        s += "\", \"objective\": " + format_double(r.objective);
        s += ", \"qp_objective\": " + format_double(r.qp_objective);
        s += ", \"max_slack\": " + format_double(r.max_slack);
        s += ", \"kkt_residual\": " + format_double(r.kkt_residual);
        s += ", \"solve_seconds\": " + format_double(r.solve_seconds);
        s += ", \"iterations\": " + std::to_string(r.iterations);
        s += ", \"committed\": ";
        s += r.committed ? "true" : "false";
        s += "}\n";
    }

    for (const sim::StepRecord& rec : log.step_records) {
        s += step_line(rec);
    }

    s += "{\"type\": \"outcome\", \"outcome\": \"";
    s += sim::to_string(log.outcome);
    s += "\", \"steps\": " + std::to_string(log.steps);
    s += ", \"sim_seconds\": " + format_double(log.sim_seconds);
    s += ", \"wall_seconds\": " + format_double(log.wall_seconds);
    s += ", \"fault_message\": \"" + escape(log.fault_message) + "\"";
    s += ", \"violation_obstacle\": " + std::to_string(log.violation_obstacle);
    s += ", \"violation_point\": " + point_array(log.violation_point);
    s += "}\n";
    return s;
}

LoadedEpisode parse_episode(const std::string& text) {
    LoadedEpisode ep;
    bool saw_world = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const std::string where = "episode line " + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ConfigError(where + ": invalid JSON: " + e.what());
        }
        const std::string type = j.value("type", "");
        if (type == "meta") {
            const std::string mode = j.value("mode", "global");
            ep.log.mode = mode == "subgoal" ? sim::Mode::SubGoal : sim::Mode::GlobalGoal;
            ep.log.world_seed = j.value("world_seed", std::uint64_t{0});
        } else if (type == "world") {
            ep.world = parse_world(j.at("world").dump());
            saw_world = true;
        } else if (type == "path") {
            for (const json& p : j.at("points")) {
                ep.log.subgoal_path.waypoints.push_back(point_from(p, where));
            }
        } else if (type == "tick") {
            sim::TickRecord t;
            t.tick = j.at("tick").get<int>();
            t.state = state_from(j.at("state"), where);
            ep.log.ticks.push_back(t);
        } else if (type == "replan") {
            sim::ReplanRecord r;
            r.tick = j.at("tick").get<int>();
            r.x0 = state_from(j.at("x0"), where);
            r.target = point_from(j.at("target"), where);
            for (const json& h : j.at("half_spaces")) {
                sim::HalfSpaceRecord rec;
                rec.obstacle = h.at("obstacle").get<int>();
                const geom::Point2 eta = point_from(h.at("eta"), where);
                const geom::Point2 c = point_from(h.at("c"), where);
                rec.eta_x = eta.x;
                rec.eta_y = eta.y;
                rec.c_x = c.x;
                rec.c_y = c.y;
                r.half_spaces.push_back(rec);
            }
            for (const json& p : j.at("predicted")) {
                r.predicted.push_back(state_from(p, where));
            }
            for (const json& c : j.at("controls")) {
                r.controls.push_back(control_from(c, where));
            }
            r.status = status_from(j.at("status").get<std::string>(), where);
            r.objective = j.at("objective").get<double>();
            r.qp_objective = j.at("qp_objective").get<double>();
            r.max_slack = j.at("max_slack").get<double>();
            r.kkt_residual = j.at("kkt_residual").get<double>();
            r.solve_seconds = j.at("solve_seconds").get<double>();
            r.iterations = j.at("iterations").get<int>();
            r.committed = j.at("committed").get<bool>();
            ep.log.replans.push_back(std::move(r));
        } else if (type == "step") {
            sim::StepRecord rec;
            rec.step_index = j.at("step").get<int>();
            rec.stance = j.at("stance").get<std::string>() == "left" ? constraints::Foot::Left
                                                                     : constraints::Foot::Right;
            rec.control = control_from(j.at("control"), where);
            rec.state_begin = state_from(j.at("state_begin"), where);
            rec.state_end = state_from(j.at("state_end"), where);
            rec.completed = j.at("completed").get<bool>();
            rec.heading_ref = j.at("heading_ref").get<double>();
            rec.s_v = j.at("s_v").get<double>();
            rec.sim_time_begin = j.at("sim_time_begin").get<double>();
            ep.log.step_records.push_back(rec);
        } else if (type == "outcome") {
            const std::string o = j.at("outcome").get<std::string>();
            if (o == "goal_reached") {
                ep.log.outcome = sim::Outcome::GoalReached;
            } else if (o == "safety_violation") {
                ep.log.outcome = sim::Outcome::SafetyViolation;
            } else if (o == "solver_fault") {
                ep.log.outcome = sim::Outcome::SolverFault;
            } else if (o == "timeout") {
                ep.log.outcome = sim::Outcome::Timeout;
            } else {
                throw ConfigError(where + ": unknown outcome \"" + o + "\"");
            }
            ep.log.steps = j.at("steps").get<int>();
            ep.log.sim_seconds = j.at("sim_seconds").get<double>();
            ep.log.wall_seconds = j.at("wall_seconds").get<double>();
            ep.log.fault_message = j.value("fault_message", "");
            ep.log.violation_obstacle = j.value("violation_obstacle", -1);
            if (j.contains("violation_point")) {
                ep.log.violation_point = point_from(j.at("violation_point"), where);
            }
        } else {
            throw ConfigError(where + ": unknown record type \"" + type + "\"");
        }
    }
    if (!saw_world) {
        throw ConfigError("episode: missing world record");
    }
    return ep;
}

void write_episode(const std::string& path, const sim::World& world, const sim::EpisodeLog& log) {
    write_text_file(path, serialize_episode(world, log));
}

LoadedEpisode load_episode(const std::string& path) {
    try {
        return parse_episode(read_text_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace lipnav::io
