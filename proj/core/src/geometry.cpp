#include "seqpack/geometry.hpp"

#include "seqpack/errors.hpp"

#include <algorithm>
#include <utility>

namespace seqpack {

bool lex_less(const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

Rational cross(const Point2& u, const Point2& v) {
    return u.x * v.y - u.y * v.x;
}

Rational orient(const Point2& o, const Point2& a, const Point2& b) {
    return cross(a - o, b - o);
}

namespace {

// Direction order over the cut just below the -y axis: directions are
// compared as angles in (-pi/2, 3*pi/2], the range a CCW edge sequence spans
// when the polygon starts at its lexicographically smallest vertex.
// half 0: dx > 0, or dx == 0 && dy > 0; half 1: the rest.
int direction_half(const Point2& d) {
    int sx = sign(Rational(d.x));
    if (sx > 0) return 0;
    if (sx == 0 && sign(Rational(d.y)) > 0) return 0;
    return 1;
}

bool direction_less(const Point2& a, const Point2& b) {
    int ha = direction_half(a), hb = direction_half(b);
    if (ha != hb) return ha < hb;
    return sign(cross(a, b)) > 0;
}

std::size_t lex_min_index(const std::vector<Point2>& pts) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (lex_less(pts[i], pts[best])) best = i;
    return best;
}

} // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> ccw_vertices) : verts_(std::move(ccw_vertices)) {
    const std::size_t n = verts_.size();
    if (n < 3) throw DegenerateInput("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = verts_[i];
        const Point2& b = verts_[(i + 1) % n];
        const Point2& c = verts_[(i + 2) % n];
        if (sign(orient(a, b, c)) <= 0)
            throw DegenerateInput("polygon vertices must be strictly convex and counter-clockwise");
    }
    // Rotate to the canonical start before the winding check so the edge
    // direction sequence is monotone in the cut order.
    std::rotate(verts_.begin(), verts_.begin() + static_cast<std::ptrdiff_t>(lex_min_index(verts_)), verts_.end());
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!direction_less(edge_vector(i), edge_vector(i + 1)))
            throw DegenerateInput("polygon winds more than once");
    }
}

bool ConvexPolygon::contains_closed(const Point2& p) const {
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (sign(orient(edge_start(i), edge_end(i), p)) < 0) return false;
    return true;
}

bool ConvexPolygon::contains_open(const Point2& p) const {
    for (std::size_t i = 0; i < verts_.size(); ++i)
        if (sign(orient(edge_start(i), edge_end(i), p)) <= 0) return false;
    return true;
}

ConvexPolygon ConvexPolygon::translated(const Point2& d) const {
    std::vector<Point2> out;
    out.reserve(verts_.size());
    for (const Point2& v : verts_) out.push_back(v + d);
    return ConvexPolygon(std::move(out));
}

ConvexPolygon ConvexPolygon::reflected() const {
    std::vector<Point2> out;
    out.reserve(verts_.size());
    for (const Point2& v : verts_) out.push_back(-v);
    return ConvexPolygon(std::move(out));
}

Rational ConvexPolygon::area() const {
    Rational twice = 0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        twice += cross(edge_start(i), edge_end(i));
    return twice / 2;
}

Point2 ConvexPolygon::vertex_centroid() const {
    Rational sx = 0, sy = 0;
    for (const Point2& v : verts_) {
        sx += v.x;
        sy += v.y;
    }
    Rational n(static_cast<long>(verts_.size()));
    return {sx / n, sy / n};
}

PrintObject::PrintObject(std::string id_, ConvexPolygon footprint_, Rational height_)
    : id(std::move(id_)), footprint(std::move(footprint_)), height(std::move(height_)) {
    if (height <= 0) throw DegenerateInput("object '" + id + "' must have positive height");
}

ExtruderProfile::ExtruderProfile(std::span<const Point2> points) : hull_(convex_hull_points(points)) {
    bool contains_origin = false;
    Point2 origin{0, 0};
    if (hull_.size() == 1) {
        contains_origin = hull_[0] == origin;
    } else if (hull_.size() == 2) {
        contains_origin = sign(orient(hull_[0], hull_[1], origin)) == 0 &&
                          std::min(hull_[0].x, hull_[1].x) <= 0 && 0 <= std::max(hull_[0].x, hull_[1].x) &&
                          std::min(hull_[0].y, hull_[1].y) <= 0 && 0 <= std::max(hull_[0].y, hull_[1].y);
    } else {
        contains_origin = ConvexPolygon(hull_).contains_closed(origin);
    }
    if (!contains_origin)
        throw DegenerateInput("extruder footprint must contain the origin (nozzle point)");
}

Plate Plate::make(Rational width, Rational height) {
    if (width <= 0 || height <= 0) throw DegenerateInput("plate dimensions must be positive");
    std::vector<Point2> rect{{0, 0}, {width, 0}, {width, height}, {0, height}};
    return Plate{width, height, ConvexPolygon(std::move(rect))};
}

std::vector<Point2> convex_hull_points(std::span<const Point2> points) {
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 1) return pts;

    auto build = [&](bool lower) {
        std::vector<Point2> chain;
        auto scan = [&](const Point2& p) {
            while (chain.size() >= 2 && sign(orient(chain[chain.size() - 2], chain.back(), p)) <= 0)
                chain.pop_back();
            chain.push_back(p);
        };
        if (lower)
            for (const Point2& p : pts) scan(p);
        else
            for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
        return chain;
    };

    std::vector<Point2> lower = build(true), upper = build(false);
    if (lower.size() == 2 && upper.size() == 2) return lower; // collinear input: extremes
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;
}

ConvexPolygon convex_hull(std::span<const Point2> points) {
    std::vector<Point2> hull = convex_hull_points(points);
    if (hull.size() < 3) throw DegenerateInput("convex hull needs at least 3 distinct non-collinear points");
    return ConvexPolygon(std::move(hull));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b) {
    // Both vertex lists start at the lexicographically smallest vertex, so
    // their edge directions are strictly increasing in the cut order and can
    // be merged in one pass. Parallel edges are fused to keep the result
    // strictly convex.
    const std::size_t n = a.size(), m = b.size();
    std::vector<Point2> out;
    out.reserve(n + m);
    Point2 current = a.vertex(0) + b.vertex(0);
    std::size_t ia = 0, ib = 0;
    while (ia < n || ib < m) {
        out.push_back(current);
        Point2 step{0, 0};
        if (ib == m) {
            step = a.edge_vector(ia++);
        } else if (ia == n) {
            step = b.edge_vector(ib++);
        } else {
            Point2 ea = a.edge_vector(ia), eb = b.edge_vector(ib);
            if (direction_less(ea, eb)) {
                step = ea;
                ++ia;
            } else if (direction_less(eb, ea)) {
                step = eb;
                ++ib;
            } else {
                step = ea + eb;
                ++ia;
                ++ib;
            }
        }
        current = current + step;
    }
    return ConvexPolygon(std::move(out));
}

ConvexPolygon envelope_hull(const PrintObject& obj, const ExtruderProfile& extruder) {
    const std::vector<Point2>& e = extruder.hull_points();
    if (e.size() == 1) return obj.footprint.translated(e[0]);
    if (e.size() == 2) {
        std::vector<Point2> sums;
        sums.reserve(obj.footprint.size() * 2);
        for (const Point2& v : obj.footprint.vertices())
            for (const Point2& p : e) sums.push_back(v + p);
        return convex_hull(sums);
    }
    return minkowski_sum(obj.footprint, ConvexPolygon(e));
}

ConvexPolygon scale_plate(const Plate& plate, const Rational& sigma, const Point2& anchor) {
    if (sigma <= 0 || sigma > 1) throw InvalidSigma("sigma must be in (0, 1], got " + exact_string(sigma));
    if (!plate.polygon.contains_closed(anchor))
        throw InvalidSigma("scale anchor must lie on or inside the plate");
    std::vector<Point2> out;
    out.reserve(plate.polygon.size());
    for (const Point2& p : plate.polygon.vertices())
        out.push_back({anchor.x + sigma * (p.x - anchor.x), anchor.y + sigma * (p.y - anchor.y)});
    return ConvexPolygon(std::move(out));
}

namespace {

// p collinear with [a,b]: is it within the segment's bounding box?
bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

} // namespace

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
    int d1 = sign(orient(q1, q2, p1));
    int d2 = sign(orient(q1, q2, p2));
    int d3 = sign(orient(p1, p2, q1));
    int d4 = sign(orient(p1, p2, q2));
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

bool polygons_overlap(const ConvexPolygon& a, const Point2& da, const ConvexPolygon& b, const Point2& db) {
    // Interiors of a+da and b+db meet iff db-da lies strictly inside the
    // Minkowski difference a (+) -b.
    ConvexPolygon diff = minkowski_sum(a, b.reflected());
    return diff.contains_open(db - da);
}

} // namespace seqpack
