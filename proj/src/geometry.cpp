#include "lipnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lipnav::geom {

double norm(Point2 a) { return std::hypot(a.x, a.y); }

double distance(Point2 a, Point2 b) { return norm(a - b); }

namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

Point2 normalized(Point2 v) {
    const double n = norm(v);
    return {v.x / n, v.y / n};
}

// Outward normal of CCW edge a -> b (interior lies to the left).
Point2 edge_outward_normal(Point2 a, Point2 b) {
    const Point2 d = b - a;
    return normalized({d.y, -d.x});
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) {
        throw DegenerateInput("polygon needs at least 3 vertices");
    }
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!finite(vertices_[i])) {
            throw DegenerateInput("polygon vertex is not finite");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distance(vertices_[i], vertices_[j]) <= kGeomTol) {
                throw DegenerateInput("repeated polygon vertex");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = vertices_[i];
        const Point2& b = vertices_[(i + 1) % n];
        const Point2& c = vertices_[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) {
            throw DegenerateInput("polygon vertices not in strictly convex CCW order");
        }
    }
}

Point2 ConvexPolygon::centroid() const {
    Point2 c{0.0, 0.0};
    for (const Point2& v : vertices_) {
        c = c + v;
    }
    return (1.0 / static_cast<double>(vertices_.size())) * c;
}

ConvexPolygon convex_hull(const std::vector<Point2>& points) {
    std::vector<Point2> pts;
    pts.reserve(points.size());
    for (const Point2& p : points) {
        if (!finite(p)) {
            throw DegenerateInput("hull input point is not finite");
        }
        bool dup = false;
        for (const Point2& q : pts) {
            if (distance(p, q) <= kGeomTol) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            pts.push_back(p);
        }
    }
    if (pts.size() < 3) {
        throw DegenerateInput("hull needs at least 3 distinct points");
    }

    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });

    // Andrew monotone chain; strict turns only, so collinear points drop out.
    const auto build = [](const std::vector<Point2>& src, std::vector<Point2>& chain) {
        for (const Point2& p : src) {
            while (chain.size() >= 2 &&
                   cross(chain.back() - chain[chain.size() - 2], p - chain.back()) <= kGeomTol) {
                chain.pop_back();
            }
            chain.push_back(p);
        }
    };

    std::vector<Point2> lower, upper;
    build(pts, lower);
    std::vector<Point2> rev(pts.rbegin(), pts.rend());
    build(rev, upper);

    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    if (lower.size() < 3) {
        throw DegenerateInput("hull input is collinear");
    }
    return ConvexPolygon(std::move(lower));
}

bool point_in_polygon(const ConvexPolygon& poly, Point2 q) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertex(i);
        const Point2& b = poly.vertex((i + 1) % n);
        if (cross(b - a, q - a) < -1e-12) {
            return false;
        }
    }
    return true;
}

double segment_distance(Point2 q, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(q - a, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(q, a + t * d);
}

double boundary_distance(const ConvexPolygon& poly, Point2 q) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, segment_distance(q, poly.vertex(i), poly.vertex((i + 1) % n)));
    }
    return best;
}

ClosestPointResult closest_point(const ConvexPolygon& poly, Point2 q) {
    if (!finite(q)) {
        throw DegenerateInput("query point is not finite");
    }

    ClosestPointResult best;
    best.distance = std::numeric_limits<double>::infinity();

    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly.vertex(i);
        const Point2& b = poly.vertex((i + 1) % n);
        const Point2 d = b - a;
        double t = dot(q - a, d) / dot(d, d);
        t = std::clamp(t, 0.0, 1.0);
        const Point2 c = a + t * d;
        const double dist = distance(q, c);
        if (dist < best.distance - kGeomTol) {
            best.point = c;
            best.distance = dist;
            // Projections landing on an endpoint report the Vertex tag.
            if (distance(c, a) <= kGeomTol) {
                best.feature = ClosestPointResult::Feature::Vertex;
                best.index = i;
                best.point = a;
            } else if (distance(c, b) <= kGeomTol) {
                best.feature = ClosestPointResult::Feature::Vertex;
                best.index = (i + 1) % n;
                best.point = b;
            } else {
                best.feature = ClosestPointResult::Feature::Edge;
                best.index = i;
            }
        }
    }

    if (best.distance > kGeomTol && point_in_polygon(poly, q)) {
        throw QueryInsideObstacle("closest_point query lies inside the polygon");
    }
    return best;
}

Point2 outward_normal(const ConvexPolygon& poly, const ClosestPointResult& result, Point2 q) {
    if (result.feature == ClosestPointResult::Feature::Edge) {
        const Point2& a = poly.vertex(result.index);
        const Point2& b = poly.vertex((result.index + 1) % poly.size());
        return edge_outward_normal(a, b);
    }
    const Point2 r = q - result.point;
    if (norm(r) <= kGeomTol) {
        throw DegenerateNormal("query coincides with the closest vertex");
    }
    return normalized(r);
}

Point2 boundary_normal(const ConvexPolygon& poly, const ClosestPointResult& result) {
    const std::size_t n = poly.size();
    if (result.feature == ClosestPointResult::Feature::Edge) {
        return edge_outward_normal(poly.vertex(result.index), poly.vertex((result.index + 1) % n));
    }
    // Vertex: bisector of the two adjacent edge normals.
    const std::size_t i = result.index;
    const Point2 prev = poly.vertex((i + n - 1) % n);
    const Point2 cur = poly.vertex(i);
    const Point2 next = poly.vertex((i + 1) % n);
    return normalized(edge_outward_normal(prev, cur) + edge_outward_normal(cur, next));
}

namespace {

int orient_sign(Point2 a, Point2 b, Point2 c) {
    const double v = cross(b - a, c - a);
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const int o1 = orient_sign(a, b, c);
    const int o2 = orient_sign(a, b, d);
    const int o3 = orient_sign(c, d, a);
    const int o4 = orient_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    const auto on_segment = [](Point2 p, Point2 u, Point2 v) {
        return orient_sign(u, v, p) == 0 && p.x >= std::min(u.x, v.x) - 1e-12 &&
               p.x <= std::max(u.x, v.x) + 1e-12 && p.y >= std::min(u.y, v.y) - 1e-12 &&
               p.y <= std::max(u.y, v.y) + 1e-12;
    };
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
           (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

double segment_segment_distance(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_intersect(a, b, c, d)) {
        return 0.0;
    }
    return std::min(std::min(segment_distance(a, c, d), segment_distance(b, c, d)),
                    std::min(segment_distance(c, a, b), segment_distance(d, a, b)));
}

}  // namespace

double polygon_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
    if (point_in_polygon(b, a.vertex(0)) || point_in_polygon(a, b.vertex(0))) {
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t na = a.size(), nb = b.size();
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            best = std::min(best, segment_segment_distance(a.vertex(i), a.vertex((i + 1) % na),
                                                           b.vertex(j), b.vertex((j + 1) % nb)));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

bool segment_intersects_polygon(Point2 a, Point2 b, const ConvexPolygon& poly) {
    if (point_in_polygon(poly, a) || point_in_polygon(poly, b)) {
        return true;
    }
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (segments_intersect(a, b, poly.vertex(i), poly.vertex((i + 1) % n))) {
            return true;
        }
    }
    return false;
}

ConvexPolygon inflate(const ConvexPolygon& poly, double r) {
    if (r <= 0.0) {
        return poly;
    }
    constexpr int kSides = 16;
    constexpr double pi = std::numbers::pi;
    const double circum = r / std::cos(pi / kSides);  // circumscribe the disk
    std::vector<Point2> sums;
    sums.reserve(poly.size() * kSides);
    for (const Point2& v : poly.vertices()) {
        for (int k = 0; k < kSides; ++k) {
            const double ang = 2.0 * pi * (k + 0.5) / kSides;
            sums.push_back({v.x + circum * std::cos(ang), v.y + circum * std::sin(ang)});
        }
    }
    return convex_hull(sums);
}

}  // namespace lipnav::geom
