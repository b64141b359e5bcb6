#pragma once

#include "seqpack/rational.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace seqpack {

// Millimeter coordinates, exact. No predicate in this module depends on a
// tolerance.
struct Point2 {
    Rational x;
    Rational y;

    bool operator==(const Point2&) const = default;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator-() const { return {-x, -y}; }
};

// Lexicographic (x, then y); drives canonical vertex order.
bool lex_less(const Point2& a, const Point2& b);

// u.x*v.y - u.y*v.x
Rational cross(const Point2& u, const Point2& v);
// (a-o) x (b-o): >0 left turn, <0 right turn, 0 collinear
Rational orient(const Point2& o, const Point2& a, const Point2& b);

// A strictly convex CCW polygon. Canonical form: the vertex list starts at
// the lexicographically smallest vertex, so equal polygons compare equal as
// vertex lists. Invariants enforced on construction:
//   - at least 3 vertices
//   - counter-clockwise, strictly convex (no collinear triple, no duplicates)
//   - winds exactly once
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point2> ccw_vertices);

    const std::vector<Point2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Point2& vertex(std::size_t i) const { return verts_[i]; }
    // Endpoints of edge i are vertex(i) and vertex((i+1) % size()).
    Point2 edge_start(std::size_t i) const { return verts_[i]; }
    Point2 edge_end(std::size_t i) const { return verts_[(i + 1) % verts_.size()]; }
    Point2 edge_vector(std::size_t i) const { return edge_end(i) - edge_start(i); }

    bool contains_closed(const Point2& p) const;
    bool contains_open(const Point2& p) const;

    ConvexPolygon translated(const Point2& d) const;
    // Point reflection through the origin (preserves CCW orientation).
    ConvexPolygon reflected() const;

    Rational area() const;
    // Arithmetic mean of the vertices; used for label placement.
    Point2 vertex_centroid() const;

    bool operator==(const ConvexPolygon&) const = default;

private:
    std::vector<Point2> verts_;
};

struct PrintObject {
    PrintObject(std::string id, ConvexPolygon footprint, Rational height);

    std::string id;
    ConvexPolygon footprint; // xy-projection hull, local frame
    Rational height;         // > 0
};

// The xy-projection hull of the moving printer parts (extruder, head,
// gantry). May be degenerate: a single point or a segment is accepted so a
// nozzle-only profile behaves as the identity envelope. Must contain the
// origin, which is the nozzle point.
class ExtruderProfile {
public:
    explicit ExtruderProfile(std::span<const Point2> points);

    // CCW hull; size may be 1 or 2 for degenerate profiles.
    const std::vector<Point2>& hull_points() const { return hull_; }

private:
    std::vector<Point2> hull_;
};

// Axis-aligned rectangular plate [0,width] x [0,height].
struct Plate {
    static Plate make(Rational width, Rational height);

    Rational width;
    Rational height;
    ConvexPolygon polygon;

    Point2 center() const { return {width / 2, height / 2}; }
};

// Exact convex hull (Andrew monotone chain), minimal vertex set, CCW.
// Throws DegenerateInput on fewer than 3 distinct points or all collinear.
ConvexPolygon convex_hull(std::span<const Point2> points);

// Hull that tolerates degenerate input: returns 1 point, 2 segment
// endpoints, or the full CCW hull. Used where envelopes of degenerate
// extruder profiles are formed.
std::vector<Point2> convex_hull_points(std::span<const Point2> points);

// Exact Minkowski sum of convex polygons via the CCW edge merge;
// vertex count <= |a| + |b|.
ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b);

// C(E(O))^xy: the object footprint grown by the extruder profile. Contains
// the footprint whenever the profile contains the origin.
ConvexPolygon envelope_hull(const PrintObject& obj, const ExtruderProfile& extruder);

// {anchor + sigma*(p - anchor)}; anchor is a fixed point of the map.
// Throws InvalidSigma outside (0,1]; the anchor must lie on or inside the
// plate polygon.
ConvexPolygon scale_plate(const Plate& plate, const Rational& sigma, const Point2& anchor);

// Closed-segment intersection via exact orientation tests; collinear overlap
// counts as intersection.
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2);

// True iff the open interiors of a+da and b+db intersect. Shared boundary
// alone is not overlap: sigma minimization drives placements to contact, so
// touching must stay legal.
bool polygons_overlap(const ConvexPolygon& a, const Point2& da, const ConvexPolygon& b, const Point2& db);

} // namespace seqpack
