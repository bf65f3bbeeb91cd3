#include "lipnav/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "lipnav/scenario.hpp"

namespace lipnav::io {

namespace {

constexpr double kScale = 60.0;   // px per meter
constexpr double kMargin = 0.5;   // m of padding around the bounds

struct Frame {
    double x0, y1;  // world-frame top-left corner (max y maps to min py)
    double width, height;

    double px(double x) const { return (x - x0) * kScale; }
    double py(double y) const { return (y1 - y) * kScale; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string polygon_points(const Frame& fr, const geom::ConvexPolygon& poly) {
    std::string s;
    for (const geom::Point2& v : poly.vertices()) {
        if (!s.empty()) {
            s += " ";
        }
        s += num(fr.px(v.x)) + "," + num(fr.py(v.y));
    }
    return s;
}

void circle(std::string& s, const Frame& fr, geom::Point2 c, double r_px, const char* style) {
    s += "<circle cx=\"" + num(fr.px(c.x)) + "\" cy=\"" + num(fr.py(c.y)) + "\" r=\"" +
         num(r_px) + "\" " + style + "/>\n";
}

void line(std::string& s, const Frame& fr, geom::Point2 a, geom::Point2 b, const char* style) {
    s += "<line x1=\"" + num(fr.px(a.x)) + "\" y1=\"" + num(fr.py(a.y)) + "\" x2=\"" +
         num(fr.px(b.x)) + "\" y2=\"" + num(fr.py(b.y)) + "\" " + style + "/>\n";
}

}  // namespace

std::string render_svg(const sim::World& world, const sim::EpisodeLog& log,
                       double goal_tolerance) {
    Frame fr;
    fr.x0 = world.bounds.x_min - kMargin;
    fr.y1 = world.bounds.y_max + kMargin;
    fr.width = (world.bounds.width() + 2.0 * kMargin) * kScale;
    fr.height = (world.bounds.height() + 2.0 * kMargin) * kScale;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(fr.width) + "\" height=\"" +
         num(fr.height) + "\" viewBox=\"0 0 " + num(fr.width) + " " + num(fr.height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    s += "<rect x=\"" + num(fr.px(world.bounds.x_min)) + "\" y=\"" + num(fr.py(world.bounds.y_max)) +
         "\" width=\"" + num(world.bounds.width() * kScale) + "\" height=\"" +
         num(world.bounds.height() * kScale) +
         "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";

    for (const geom::ConvexPolygon& poly : world.inflated_obstacles) {
        s += "<polygon points=\"" + polygon_points(fr, poly) +
             "\" fill=\"none\" stroke=\"#b0b6c0\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    }
    for (const geom::ConvexPolygon& poly : world.obstacles) {
        s += "<polygon points=\"" + polygon_points(fr, poly) +
             "\" fill=\"#7e8aa0\" fill-opacity=\"0.55\" stroke=\"#4c5568\" stroke-width=\"1.5\"/>\n";
    }

    if (!log.subgoal_path.waypoints.empty()) {
        std::string pts;
        for (const geom::Point2& p : log.subgoal_path.waypoints) {
            if (!pts.empty()) {
                pts += " ";
            }
            pts += num(fr.px(p.x)) + "," + num(fr.py(p.y));
        }
        s += "<polyline points=\"" + pts +
             "\" fill=\"none\" stroke=\"#2a9d8f\" stroke-width=\"1.5\" "
             "stroke-dasharray=\"7,5\"/>\n";
        for (const geom::Point2& p : log.subgoal_path.waypoints) {
            circle(s, fr, p, 3.0, "fill=\"#2a9d8f\"");
        }
    }

    // Half-space boundaries of the last committed plan, drawn long enough
    // that the viewport clips them.
    const sim::ReplanRecord* last_committed = nullptr;
    for (const sim::ReplanRecord& r : log.replans) {
        if (r.committed) {
            last_committed = &r;
        }
    }
    if (last_committed != nullptr) {
        const double span = world.bounds.width() + world.bounds.height();
        for (const sim::HalfSpaceRecord& h : last_committed->half_spaces) {
            const geom::Point2 d{-h.eta_y, h.eta_x};
            const geom::Point2 a{h.c_x - span * d.x, h.c_y - span * d.y};
            const geom::Point2 b{h.c_x + span * d.x, h.c_y + span * d.y};
            line(s, fr, a, b, "stroke=\"#e0a040\" stroke-width=\"1\" stroke-opacity=\"0.7\"");
        }
    }

    if (!log.ticks.empty()) {
        const std::size_t stride =
            std::max<std::size_t>(1, log.ticks.size() / 2000);
        std::string pts;
        for (std::size_t i = 0; i < log.ticks.size(); i += stride) {
            const lip::LipState& x = log.ticks[i].state;
            if (!pts.empty()) {
                pts += " ";
            }
            pts += num(fr.px(x.p_x)) + "," + num(fr.py(x.p_y));
        }
        const lip::LipState& xl = log.ticks.back().state;
        pts += " " + num(fr.px(xl.p_x)) + "," + num(fr.py(xl.p_y));
        s += "<polyline points=\"" + pts +
             "\" fill=\"none\" stroke=\"#1d3557\" stroke-width=\"2\"/>\n";
    }

    for (const sim::StepRecord& rec : log.step_records) {
        const char* style = rec.stance == constraints::Foot::Left
                                ? "fill=\"#3a6fd8\" fill-opacity=\"0.8\""
                                : "fill=\"#d0443a\" fill-opacity=\"0.8\"";
        circle(s, fr, rec.control.foot(), 3.5, style);
    }

    circle(s, fr, world.start, 5.0, "fill=\"none\" stroke=\"#1d3557\" stroke-width=\"2\"");
    circle(s, fr, world.goal, goal_tolerance * kScale,
           "fill=\"none\" stroke=\"#2a9d8f\" stroke-width=\"1.5\" stroke-dasharray=\"4,3\"");
    circle(s, fr, world.goal, 4.0, "fill=\"#2a9d8f\"");

    if (log.outcome == sim::Outcome::SafetyViolation) {
        const geom::Point2 p = log.violation_point;
        const double r = 0.12;
        line(s, fr, {p.x - r, p.y - r}, {p.x + r, p.y + r},
             "stroke=\"#c1121f\" stroke-width=\"3\"");
        line(s, fr, {p.x - r, p.y + r}, {p.x + r, p.y - r},
             "stroke=\"#c1121f\" stroke-width=\"3\"");
    }

    s += "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\">";
    s += "seed " + std::to_string(log.world_seed) + ", " + sim::to_string(log.mode) + ", " +
         sim::to_string(log.outcome) + ", " + std::to_string(log.steps) + " steps";
    s += "</text>\n";
    s += "</svg>\n";
    return s;
}

void write_svg(const std::string& path, const sim::World& world, const sim::EpisodeLog& log,
               double goal_tolerance) {
    write_text_file(path, render_svg(world, log, goal_tolerance));
}

}  // namespace lipnav::io
