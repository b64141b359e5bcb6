#include "seqpack/constraints.hpp"

#include "seqpack/errors.hpp"

#include <algorithm>
#include <array>

namespace seqpack {

LinExpr Placement::x() const {
    if (is_variable()) return LinExpr::var({VarKind::X, object_index});
    return LinExpr::of(offset.x);
}

LinExpr Placement::y() const {
    if (is_variable()) return LinExpr::var({VarKind::Y, object_index});
    return LinExpr::of(offset.y);
}

namespace {

struct SymPoint {
    LinExpr x, y;
};

SymPoint placed(const Placement& p, const Point2& local) {
    return {p.x() + LinExpr::of(local.x), p.y() + LinExpr::of(local.y)};
}

// cross(d, w) for a constant direction d and a symbolic point difference w.
LinExpr cross_const_sym(const Point2& d, const SymPoint& w) {
    return w.y * d.x - w.x * d.y;
}

SymPoint operator-(const SymPoint& a, const SymPoint& b) {
    return {a.x - b.x, a.y - b.y};
}

// Appends expr REL 0 to a disjunct list, folding constants: a true constant
// marks the whole clause satisfied, a false constant is dropped.
void push_atom(std::vector<LinIneq>& disjuncts, bool& clause_true, const LinExpr& e, bool strict) {
    bool truth = false;
    if (auto atom = ineq_le_zero(e, strict, &truth))
        disjuncts.push_back(std::move(*atom));
    else if (truth)
        clause_true = true;
}

void emit_clause(std::vector<Clause>& out, std::vector<LinIneq> disjuncts, bool clause_true) {
    if (clause_true) return;
    if (disjuncts.empty()) throw InternalError("constraint builder produced a constant-false clause");
    out.emplace_back(std::move(disjuncts));
}

} // namespace

std::vector<Clause> pop_constraint(const Placement& a, std::span<const Point2> verts_a,
                                   const Placement& b, const ConvexPolygon& poly_b) {
    std::vector<Clause> out;
    out.reserve(verts_a.size());
    for (const Point2& va : verts_a) {
        std::vector<LinIneq> disjuncts;
        bool clause_true = false;
        SymPoint pa = placed(a, va);
        for (std::size_t e = 0; e < poly_b.size(); ++e) {
            // On or outside the supporting line of edge e: cross <= 0 since
            // the interior of a CCW polygon lies strictly left of each edge.
            SymPoint e1 = placed(b, poly_b.edge_start(e));
            push_atom(disjuncts, clause_true, cross_const_sym(poly_b.edge_vector(e), pa - e1), false);
        }
        emit_clause(out, std::move(disjuncts), clause_true);
    }
    return out;
}

std::vector<Clause> lni_constraint(const Placement& a, const Point2& a1, const Point2& a2,
                                   const Placement& b, const Point2& b1, const Point2& b2) {
    const Point2 da = a2 - a1;
    const Point2 db = b2 - b1;
    SymPoint pa1 = placed(a, a1);
    SymPoint pb1 = placed(b, b1);
    SymPoint pb2 = placed(b, b2);
    SymPoint pa2 = placed(a, a2);

    // orient(line of A, endpoint of B) and vice versa; strictly positive or
    // strictly negative, both endpoints on the same side.
    LinExpr ob1 = cross_const_sym(da, pb1 - pa1);
    LinExpr ob2 = cross_const_sym(da, pb2 - pa1);
    LinExpr oa1 = cross_const_sym(db, pa1 - pb1);
    LinExpr oa2 = cross_const_sym(db, pa2 - pb1);

    // Four disjuncts, each a conjunction of two strict orientation atoms.
    // expr > 0 is encoded as -expr < 0.
    const std::array<std::array<LinExpr, 2>, 4> conj = {{
        {ob1 * Rational(-1), ob2 * Rational(-1)}, // B strictly left of A's line
        {ob1, ob2},                               // B strictly right
        {oa1 * Rational(-1), oa2 * Rational(-1)}, // A strictly left of B's line
        {oa1, oa2},                               // A strictly right
    }};

    // Distribute the conjunctions: one clause per choice of conjunct from
    // each disjunct, at most 2^4 = 16 clauses.
    std::vector<Clause> out;
    out.reserve(16);
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<LinIneq> disjuncts;
        bool clause_true = false;
        for (int d = 0; d < 4; ++d)
            push_atom(disjuncts, clause_true, conj[d][(mask >> d) & 1], true);
        emit_clause(out, std::move(disjuncts), clause_true);
    }
    return out;
}

std::vector<Clause> pip_constraint(const Placement& p, const ConvexPolygon& poly,
                                   const ConvexPolygon& container) {
    std::vector<Clause> out;
    out.reserve(poly.size() * container.size());
    for (const Point2& v : poly.vertices()) {
        SymPoint pv = placed(p, v);
        for (std::size_t e = 0; e < container.size(); ++e) {
            // Inside or on: cross >= 0, encoded as -cross <= 0.
            SymPoint e1{LinExpr::of(container.edge_start(e).x), LinExpr::of(container.edge_start(e).y)};
            LinExpr c = cross_const_sym(container.edge_vector(e), pv - e1);
            std::vector<LinIneq> unit;
            bool clause_true = false;
            push_atom(unit, clause_true, c * Rational(-1), false);
            emit_clause(out, std::move(unit), clause_true);
        }
    }
    return out;
}

Clause time_separation(int i, int j, const Rational& eps_t) {
    if (i == j) throw InternalError("time separation of an object with itself");
    LinExpr ti = LinExpr::var({VarKind::T, i});
    LinExpr tj = LinExpr::var({VarKind::T, j});
    std::vector<LinIneq> disjuncts;
    disjuncts.push_back(*ineq_le_zero(ti - tj + LinExpr::of(eps_t), true));
    disjuncts.push_back(*ineq_le_zero(tj - ti + LinExpr::of(eps_t), true));
    return Clause(std::move(disjuncts));
}

std::vector<Clause> guard_with_order(int i, int j, const Rational& eps_t, const std::vector<Clause>& body) {
    LinExpr escape = LinExpr::var({VarKind::T, j}) - LinExpr::var({VarKind::T, i}) + LinExpr::of(eps_t);
    LinIneq escape_atom = *ineq_le_zero(escape, true); // T_j + eps < T_i
    std::vector<Clause> out;
    out.reserve(body.size());
    for (const Clause& c : body) {
        std::vector<LinIneq> disjuncts;
        disjuncts.reserve(c.disjuncts.size() + 1);
        disjuncts.push_back(escape_atom);
        disjuncts.insert(disjuncts.end(), c.disjuncts.begin(), c.disjuncts.end());
        out.emplace_back(std::move(disjuncts));
    }
    return out;
}

namespace {

void add_time_window(Formula& f, int index, const Rational& lo, bool lo_strict, const Rational& hi) {
    LinExpr t = LinExpr::var({VarKind::T, index});
    f.add(Clause({*ineq_le_zero(LinExpr::of(lo) - t, lo_strict)})); // lo < T or lo <= T
    f.add(Clause({*ineq_le_zero(t - LinExpr::of(hi), false)}));     // T <= hi
}

// Order-guarded PoP in both directions between the hull of i and the
// envelope of j, for the order "i prints before j".
void add_guarded_pair(Formula& f, int i, const ConvexPolygon& hull_i, int j, const ConvexPolygon& env_j,
                      const Rational& eps_t) {
    std::vector<Clause> body = pop_constraint(Placement::variable(i), hull_i.vertices(),
                                              Placement::variable(j), env_j);
    std::vector<Clause> rev = pop_constraint(Placement::variable(j), env_j.vertices(),
                                             Placement::variable(i), hull_i);
    body.insert(body.end(), rev.begin(), rev.end());
    f.add_all(guard_with_order(i, j, eps_t, body));
}

} // namespace

Formula build_base_formula(std::span<const PrintObject> objects, const ExtruderProfile& extruder,
                           const Rational& eps_t) {
    const int n = static_cast<int>(objects.size());
    if (n < 1) throw InternalError("base formula needs at least one object");

    std::vector<ConvexPolygon> envelopes;
    envelopes.reserve(objects.size());
    for (const PrintObject& o : objects) envelopes.push_back(envelope_hull(o, extruder));

    Formula f;
    for (int i = 0; i < n; ++i) {
        f.declare({VarKind::X, i});
        f.declare({VarKind::Y, i});
        f.declare({VarKind::T, i});
        add_time_window(f, i, 0, false, n);
    }
    // Both directions of a pair sit next to each other so the search settles
    // one pair's relative arrangement before touching the next.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            f.add(time_separation(i, j, eps_t));
            add_guarded_pair(f, i, objects[static_cast<std::size_t>(i)].footprint, j,
                             envelopes[static_cast<std::size_t>(j)], eps_t);
            add_guarded_pair(f, j, objects[static_cast<std::size_t>(j)].footprint, i,
                             envelopes[static_cast<std::size_t>(i)], eps_t);
        }
    return f;
}

Rational group_time_floor(std::span<const FixedObject> fixed, const Rational& eps_t) {
    if (fixed.empty()) return 0;
    Rational max_t = fixed.front().time;
    for (const FixedObject& fo : fixed) max_t = std::max(max_t, fo.time);
    return max_t + eps_t;
}

Formula build_group_formula(std::span<const PrintObject> group, std::span<const FixedObject> fixed,
                            const ExtruderProfile& extruder, const Rational& eps_t) {
    const int n = static_cast<int>(group.size());
    if (n < 1) throw InternalError("group formula needs at least one object");

    std::vector<ConvexPolygon> envelopes;
    envelopes.reserve(group.size());
    for (const PrintObject& o : group) envelopes.push_back(envelope_hull(o, extruder));

    const Rational t_lo = group_time_floor(fixed, eps_t);
    Formula f;
    for (int i = 0; i < n; ++i) {
        f.declare({VarKind::X, i});
        f.declare({VarKind::Y, i});
        f.declare({VarKind::T, i});
        add_time_window(f, i, t_lo, !fixed.empty(), t_lo + n);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            f.add(time_separation(i, j, eps_t));
            add_guarded_pair(f, i, group[static_cast<std::size_t>(i)].footprint, j,
                             envelopes[static_cast<std::size_t>(j)], eps_t);
            add_guarded_pair(f, j, group[static_cast<std::size_t>(j)].footprint, i,
                             envelopes[static_cast<std::size_t>(i)], eps_t);
        }

    // Fixed objects print first; no guard is needed, the order is a fact.
    for (const FixedObject& fo : fixed) {
        ConvexPolygon placed_hull = fo.object->footprint.translated(fo.position);
        for (int j = 0; j < n; ++j) {
            const ConvexPolygon& env = envelopes[static_cast<std::size_t>(j)];
            f.add_all(pop_constraint(Placement::fixed({0, 0}), placed_hull.vertices(),
                                     Placement::variable(j), env));
            f.add_all(pop_constraint(Placement::variable(j), env.vertices(),
                                     Placement::fixed({0, 0}), placed_hull));
        }
    }
    return f;
}

} // namespace seqpack
