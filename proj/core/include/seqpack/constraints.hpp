#pragma once

#include "seqpack/formula.hpp"
#include "seqpack/geometry.hpp"

#include <span>
#include <vector>

namespace seqpack {

// Where a polygon sits while a constraint is built: at the decision
// variables (X_i, Y_i) of an object still being solved, or at a constant
// position for an object already placed (sub-optimal mode fixes earlier
// groups, which shrinks atoms to fewer variables).
struct Placement {
    static Placement variable(int object_index) { return Placement{object_index, {0, 0}}; }
    static Placement fixed(Point2 at) { return Placement{-1, at}; }

    bool is_variable() const { return object_index >= 0; }

    LinExpr x() const;
    LinExpr y() const;

    int object_index; // < 0 when fixed
    Point2 offset;    // fixed position, ignored when variable
};

// Points-outside-Polygon: one clause per vertex of A, a disjunction over
// the CCW edges of B requiring the placed vertex to lie on or outside that
// edge's supporting line. Boundary contact is legal. Necessary for
// non-overlap but not sufficient on its own; Lines-not-Intersect closes the
// gap lazily.
std::vector<Clause> pop_constraint(const Placement& a, std::span<const Point2> verts_a,
                                   const Placement& b, const ConvexPolygon& poly_b);

// Lines-not-Intersect for one edge pair: the placed segments must not
// intersect, expressed as "both endpoints of one edge strictly on one side
// of the other edge's line" (two sides x two edges = 4 conjunctive
// disjuncts). The conjunctions are flattened into at most 16 pure clauses by
// distributing one conjunct per disjunct, which keeps the formula clausal
// without auxiliary variables.
std::vector<Clause> lni_constraint(const Placement& a, const Point2& a1, const Point2& a2,
                                   const Placement& b, const Point2& b1, const Point2& b2);

// Polygon-inside-Polygon against a container at a fixed position: one unit
// clause per (vertex of poly, CCW edge of container); vertices may lie on
// the boundary.
std::vector<Clause> pip_constraint(const Placement& p, const ConvexPolygon& poly,
                                   const ConvexPolygon& container);

// {T_i + eps < T_j, T_j + eps < T_i}: objects i and j are printed at times
// separated by more than eps. Symmetric, so one clause covers both
// directions of a pair.
Clause time_separation(int i, int j, const Rational& eps_t);

// Guards body by the print order "i before j": each clause gets the escape
// disjunct T_j + eps < T_i prepended, which under the separation clause is
// exactly the negation of T_i < T_j.
std::vector<Clause> guard_with_order(int i, int j, const Rational& eps_t, const std::vector<Clause>& body);

// Alg-style base formula for a standalone group: pairwise time separation
// (once per unordered pair), order-guarded PoP in both directions between
// each object hull and the other object's extruder envelope, and T bounded
// to [0, n].
Formula build_base_formula(std::span<const PrintObject> objects, const ExtruderProfile& extruder,
                           const Rational& eps_t);

// A placed object whose position and print time are constants for the
// current solve.
struct FixedObject {
    const PrintObject* object;
    Point2 position;
    Rational time;
};

// Base formula for one group solved against already-fixed objects: the
// group's internal constraints as in build_base_formula, except the group's
// T window starts strictly above max(fixed time) + eps_t so the new objects
// print after everything already on the plate; plus unguarded PoP between
// each fixed hull (earlier) and each group member's envelope, in both PoP
// directions.
Formula build_group_formula(std::span<const PrintObject> group, std::span<const FixedObject> fixed,
                            const ExtruderProfile& extruder, const Rational& eps_t);

// The T window lower bound build_group_formula uses: 0 with no fixed
// objects, else max(fixed time) + eps_t (exclusive).
Rational group_time_floor(std::span<const FixedObject> fixed, const Rational& eps_t);

} // namespace seqpack
