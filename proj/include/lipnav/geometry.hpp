#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lipnav::geom {

inline constexpr double kGeomTol = 1e-9;  // coincidence tolerance, meters

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);
double distance(Point2 a, Point2 b);

/// Axis-aligned workspace bounds.
struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool contains(Point2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct QueryInsideObstacle : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateNormal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strictly convex polygon, vertices in counterclockwise order.
/// Construction rejects collinear triples and repeated vertices.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    const Point2& vertex(std::size_t i) const { return vertices_[i]; }
    Point2 centroid() const;

private:
    std::vector<Point2> vertices_;
};

struct ClosestPointResult {
    enum class Feature { Vertex, Edge };
    Point2 point;
    Feature feature = Feature::Vertex;
    std::size_t index = 0;  // vertex index, or index of edge (v[i] -> v[i+1])
    double distance = 0.0;
};

/// Smallest convex polygon containing all input points (CCW, collinear
/// points dropped). Throws DegenerateInput for < 3 distinct points or a
/// fully collinear set.
ConvexPolygon convex_hull(const std::vector<Point2>& points);

/// Closest boundary point to q. q must be outside or on the boundary;
/// a query strictly inside throws QueryInsideObstacle. Ties between an
/// edge and its endpoints resolve to the Vertex tag.
ClosestPointResult closest_point(const ConvexPolygon& poly, Point2 q);

/// Unit normal pointing away from the obstacle at the closest-point
/// feature. Vertex feature requires q strictly off the vertex
/// (throws DegenerateNormal otherwise); edge feature uses the edge normal.
Point2 outward_normal(const ConvexPolygon& poly, const ClosestPointResult& result, Point2 q);

/// Outward normal for a query sitting on the boundary: the containing
/// edge's normal, or the bisector of the two adjacent edge normals at a
/// vertex. Used when the closest-point distance is ~0.
Point2 boundary_normal(const ConvexPolygon& poly, const ClosestPointResult& result);

/// True iff q is inside or on the boundary (all edge crosses >= -1e-12).
bool point_in_polygon(const ConvexPolygon& poly, Point2 q);

/// Unsigned distance from q to the polygon boundary (0 on the boundary,
/// positive inside and outside).
double boundary_distance(const ConvexPolygon& poly, Point2 q);

/// Minimum distance between two polygons as solid sets; 0 when they
/// intersect or one contains the other.
double polygon_distance(const ConvexPolygon& a, const ConvexPolygon& b);

/// Distance from point q to segment [a, b].
double segment_distance(Point2 q, Point2 a, Point2 b);

/// True iff segment [a, b] touches the polygon (endpoint inside or any
/// edge crossing).
bool segment_intersects_polygon(Point2 a, Point2 b, const ConvexPolygon& poly);

/// Conservative outward inflation by radius r (Minkowski sum with a
/// circumscribed regular 16-gon of the disk).
ConvexPolygon inflate(const ConvexPolygon& poly, double r);

}  // namespace lipnav::geom
