#include "seqpack/cegar.hpp"

#include "seqpack/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace seqpack {

void EngineConfig::validate() const {
    if (eps_t <= 0) throw InternalError("eps_t must be positive");
    if (eps_xy <= 0) throw InternalError("eps_xy must be positive");
    if (group_size < 1) throw InternalError("group size must be at least 1");
    if (bounded_deadline.count() <= 0) throw InternalError("bounded deadline must be positive");
    if (refinement_cap < 0) throw InternalError("refinement cap must be nonnegative");
}

std::vector<PlacementEntry> PlateAssignment::ordered_entries() const {
    std::vector<PlacementEntry> out;
    for (const PlacementGroup& g : groups) out.insert(out.end(), g.entries.begin(), g.entries.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const PlacementEntry& a, const PlacementEntry& b) { return a.t < b.t; });
    return out;
}

std::size_t Schedule::object_count() const {
    std::size_t n = 0;
    for (const PlateAssignment& p : plates)
        for (const PlacementGroup& g : p.groups) n += g.entries.size();
    return n;
}

const char* violation_kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::NonColliding: return "non-colliding";
        case Violation::Kind::PlateContainment: return "plate-containment";
        case Violation::Kind::Traversability: return "traversability";
    }
    throw InternalError("unknown violation kind");
}

namespace {

// --- area presolve -------------------------------------------------------
// A feasible placement makes the group footprints pairwise interior-
// disjoint, disjoint from every fixed hull, and contained in the
// sigma-plate. So sum(group areas) must fit into the sigma-plate area that
// fixed hulls do not already cover. Rectangular sigma-plates make the
// fixed-hull clipping four half-plane cuts.

std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, bool vertical, const Rational& bound,
                                   bool keep_below) {
    auto coord = [&](const Point2& p) { return vertical ? p.x : p.y; };
    auto inside = [&](const Point2& p) { return keep_below ? coord(p) <= bound : coord(p) >= bound; };
    std::vector<Point2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        bool ia = inside(a), ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
            Rational t = (bound - coord(a)) / (coord(b) - coord(a));
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

Rational shoelace_area(const std::vector<Point2>& poly) {
    if (poly.size() < 3) return 0;
    Rational twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
    return twice / 2;
}

struct AlignedRect {
    Rational x0, y0, x1, y1;
};

AlignedRect bounding_rect(const ConvexPolygon& p) {
    AlignedRect r{p.vertex(0).x, p.vertex(0).y, p.vertex(0).x, p.vertex(0).y};
    for (const Point2& v : p.vertices()) {
        r.x0 = std::min(r.x0, v.x);
        r.y0 = std::min(r.y0, v.y);
        r.x1 = std::max(r.x1, v.x);
        r.y1 = std::max(r.y1, v.y);
    }
    return r;
}

Rational area_within(const ConvexPolygon& poly, const AlignedRect& rect) {
    std::vector<Point2> clipped = poly.vertices();
    clipped = clip_halfplane(clipped, true, rect.x0, false);
    if (clipped.size() < 3) return 0;
    clipped = clip_halfplane(clipped, true, rect.x1, true);
    if (clipped.size() < 3) return 0;
    clipped = clip_halfplane(clipped, false, rect.y0, false);
    if (clipped.size() < 3) return 0;
    clipped = clip_halfplane(clipped, false, rect.y1, true);
    return shoelace_area(clipped);
}

// UNSAT by counting: true when the group provably cannot fit. The
// sigma-plate is an axis-aligned rectangle by construction.
bool area_infeasible(const ConvexPolygon& sigma_plate, std::span<const PrintObject> group,
                     std::span<const std::pair<ConvexPolygon, Rational>> fixed_hulls) {
    AlignedRect rect = bounding_rect(sigma_plate);
    for (const PrintObject& o : group) {
        AlignedRect b = bounding_rect(o.footprint);
        if (b.x1 - b.x0 > rect.x1 - rect.x0 || b.y1 - b.y0 > rect.y1 - rect.y0) return true;
    }
    Rational need = 0;
    for (const PrintObject& o : group) need += o.footprint.area();
    Rational avail = sigma_plate.area();
    for (const auto& [hull, full_area] : fixed_hulls) avail -= area_within(hull, rect);
    return need > avail;
}

// Placement window of an object's translation inside the sigma-plate
// rectangle (closed, possibly a point).
AlignedRect placement_window(const ConvexPolygon& footprint, const AlignedRect& rect) {
    AlignedRect b = bounding_rect(footprint);
    return {rect.x0 - b.x0, rect.y0 - b.y0, rect.x1 - b.x1, rect.y1 - b.y1};
}

// True when every relative offset in the closed box r puts the pair in
// closed contact, i.e. the order "u before v" is impossible at this sigma.
// m is hull_u (+) -env_v; a box lies in a convex set iff its corners do.
bool order_blocked(const ConvexPolygon& m, const AlignedRect& r) {
    return m.contains_closed({r.x0, r.y0}) && m.contains_closed({r.x1, r.y0}) &&
           m.contains_closed({r.x1, r.y1}) && m.contains_closed({r.x0, r.y1});
}

// UNSAT by pair analysis: some pair cannot coexist at this sigma in either
// print order. Catches the near-threshold probes that would otherwise need
// a full refutation search.
bool pair_infeasible(const ConvexPolygon& sigma_plate, std::span<const PrintObject> group,
                     std::span<const ConvexPolygon> envelopes, std::span<const FixedObject> fixed) {
    AlignedRect rect = bounding_rect(sigma_plate);
    std::vector<AlignedRect> windows;
    windows.reserve(group.size());
    for (const PrintObject& o : group) windows.push_back(placement_window(o.footprint, rect));

    for (std::size_t i = 0; i < group.size(); ++i) {
        for (std::size_t j = i + 1; j < group.size(); ++j) {
            AlignedRect r_ij{windows[j].x0 - windows[i].x1, windows[j].y0 - windows[i].y1,
                             windows[j].x1 - windows[i].x0, windows[j].y1 - windows[i].y0};
            AlignedRect r_ji{-r_ij.x1, -r_ij.y1, -r_ij.x0, -r_ij.y0};
            ConvexPolygon m_ij = minkowski_sum(group[i].footprint, envelopes[j].reflected());
            if (!order_blocked(m_ij, r_ij)) continue;
            ConvexPolygon m_ji = minkowski_sum(group[j].footprint, envelopes[i].reflected());
            if (order_blocked(m_ji, r_ji)) return true;
        }
    }
    for (const FixedObject& fo : fixed) {
        for (std::size_t j = 0; j < group.size(); ++j) {
            AlignedRect r{windows[j].x0 - fo.position.x, windows[j].y0 - fo.position.y,
                          windows[j].x1 - fo.position.x, windows[j].y1 - fo.position.y};
            ConvexPolygon m = minkowski_sum(fo.object->footprint, envelopes[j].reflected());
            if (order_blocked(m, r)) return true;
        }
    }
    return false;
}

// --- refinement ----------------------------------------------------------

struct Participant {
    int key;               // group index, or -1-f for fixed object f
    const ConvexPolygon* hull; // local frame for group members, placed for fixed
    const ConvexPolygon* envelope; // group members only
    Point2 position;
    Rational time;
    bool is_group;
    int group_index = -1;
};

} // namespace

std::optional<std::vector<PlacementEntry>> solve_bounded(
    SolverSession& session, const ConvexPolygon& sigma_plate, std::span<const PrintObject> group,
    std::span<const FixedObject> fixed, const ExtruderProfile& extruder, const EngineConfig& config,
    RefineState& refine, BoundedStats* stats) {
    // One deadline covers the entire refinement loop, not each solver call.
    session.set_deadline(std::chrono::steady_clock::now() + config.bounded_deadline);

    std::vector<ConvexPolygon> envelopes;
    envelopes.reserve(group.size());
    for (const PrintObject& o : group) envelopes.push_back(envelope_hull(o, extruder));

    std::vector<std::pair<ConvexPolygon, Rational>> fixed_hulls;
    fixed_hulls.reserve(fixed.size());
    for (const FixedObject& fo : fixed) {
        ConvexPolygon placed = fo.object->footprint.translated(fo.position);
        Rational area = placed.area();
        fixed_hulls.emplace_back(std::move(placed), std::move(area));
    }

    if (area_infeasible(sigma_plate, group, fixed_hulls)) return std::nullopt;

    // Finite bound on lazily addable edge-pair constraints: every ordered
    // pair with a group member on the later side, all edge combinations.
    long long pair_bound = 0;
    for (std::size_t j = 0; j < group.size(); ++j) {
        long long env_edges = static_cast<long long>(envelopes[j].size());
        for (std::size_t i = 0; i < group.size(); ++i)
            if (i != j) pair_bound += static_cast<long long>(group[i].footprint.size()) * env_edges;
        for (const auto& [hull, a] : fixed_hulls)
            pair_bound += static_cast<long long>(hull.size()) * env_edges;
    }
    const long long cap = config.refinement_cap > 0 ? config.refinement_cap : pair_bound + 1;

    std::vector<Clause> pip;
    for (std::size_t i = 0; i < group.size(); ++i) {
        std::vector<Clause> cs =
            pip_constraint(Placement::variable(static_cast<int>(i)), group[i].footprint, sigma_plate);
        pip.insert(pip.end(), cs.begin(), cs.end());
    }

    // The plate-containment clauses are scoped to one probe: pushed before
    // each solve and popped right after, so only the lazily learned
    // edge-pair clauses accumulate in the session.
    struct PopGuard {
        SolverSession& s;
        ~PopGuard() { s.pop(); }
    };

    for (long long round = 0;; ++round) {
        if (round > cap)
            throw RefinementCapExceeded("refinement exceeded its finite bound of " + std::to_string(cap));

        SolveResult result = [&] {
            session.push();
            PopGuard guard{session};
            session.assert_clauses(pip);
            SolveResult r = session.solve();
            if (r.status == SolveStatus::Timeout) throw SolveTimeout("bounded solve hit its deadline");
            return r;
            // guard pops the plate-containment clauses here
        }();
        if (!result.sat()) return std::nullopt;
        if (stats) stats->rounds += 1;

        const Assignment& model = *result.model;
        std::vector<Participant> parts;
        parts.reserve(group.size() + fixed.size());
        for (std::size_t f = 0; f < fixed.size(); ++f)
            parts.push_back({-1 - static_cast<int>(f), &fixed_hulls[f].first, nullptr, {0, 0},
                             fixed[f].time, false, -1});
        for (std::size_t i = 0; i < group.size(); ++i) {
            int idx = static_cast<int>(i);
            Point2 pos{model.at({VarKind::X, idx}), model.at({VarKind::Y, idx})};
            parts.push_back({idx, &group[i].footprint, &envelopes[i], pos, model.at({VarKind::T, idx}),
                             true, idx});
        }

        // Check every (earlier hull, later envelope) pair; later objects are
        // always group members because fixed objects print first.
        std::vector<Clause> new_clauses;
        int added_pairs = 0;
        for (const Participant& u : parts) {
            for (const Participant& v : parts) {
                if (!v.is_group || u.key == v.key) continue;
                if (!(u.time < v.time)) continue;
                const ConvexPolygon& env = *v.envelope;
                for (std::size_t ea = 0; ea < u.hull->size(); ++ea) {
                    Point2 a1 = u.hull->edge_start(ea) + (u.is_group ? u.position : Point2{0, 0});
                    Point2 a2 = u.hull->edge_end(ea) + (u.is_group ? u.position : Point2{0, 0});
                    for (std::size_t eb = 0; eb < env.size(); ++eb) {
                        Point2 b1 = env.edge_start(eb) + v.position;
                        Point2 b2 = env.edge_end(eb) + v.position;
                        if (!segments_intersect(a1, a2, b1, b2)) continue;
                        if (!refine.mark(u.key, v.key, ea, eb))
                            throw InternalError("model violates an already-asserted edge-pair constraint");
                        Placement pa = u.is_group ? Placement::variable(u.group_index) : Placement::fixed({0, 0});
                        std::vector<Clause> lni =
                            lni_constraint(pa, u.hull->edge_start(ea), u.hull->edge_end(ea),
                                           Placement::variable(v.group_index), env.edge_start(eb),
                                           env.edge_end(eb));
                        if (u.is_group) lni = guard_with_order(u.group_index, v.group_index, config.eps_t, lni);
                        new_clauses.insert(new_clauses.end(), lni.begin(), lni.end());
                        ++added_pairs;
                    }
                }
            }
        }

        if (new_clauses.empty()) {
            std::vector<PlacementEntry> entries;
            entries.reserve(group.size());
            for (std::size_t i = 0; i < group.size(); ++i) {
                int idx = static_cast<int>(i);
                entries.push_back({group[i].id, model.at({VarKind::X, idx}), model.at({VarKind::Y, idx}),
                                   model.at({VarKind::T, idx})});
            }
            return entries;
        }

        if (stats) {
            stats->edge_pairs_added += added_pairs;
            if (round == 0) stats->first_model_refined = true;
        }
        session.assert_clauses(new_clauses);
    }
}

BisectResult bisect_sigma(const Plate& plate, const Point2& anchor, std::span<const PrintObject> group,
                          std::span<const FixedObject> fixed, const ExtruderProfile& extruder,
                          const EngineConfig& config) {
    config.validate();
    SolverSession session(config.backend);
    if (config.smt_dump_dir) session.set_dump(*config.smt_dump_dir, config.smt_dump_prefix);
    Formula base = build_group_formula(group, fixed, extruder, config.eps_t);
    for (const Clause& c : base.clauses()) session.assert_clause(c);
    for (const VarId& v : base.variables()) session.declare(v);

    RefineState refine;
    BisectResult out;

    auto probe = [&](const Rational& sigma) {
        out.probes += 1;
        ConvexPolygon sigma_plate = scale_plate(plate, sigma, anchor);
        return solve_bounded(session, sigma_plate, group, fixed, extruder, config, refine);
    };

    auto at_one = probe(1);
    if (!at_one) throw InfeasibleAtOne("group of " + std::to_string(group.size()) +
                                       " objects is infeasible on the full plate");
    Rational sigma_plus = 1, sigma_lo = 0;
    std::vector<PlacementEntry> best = std::move(*at_one);

    while (sigma_plus - sigma_lo > config.eps_xy) {
        Rational mid = (sigma_plus + sigma_lo) / 2;
        if (auto placed = probe(mid)) {
            sigma_plus = mid;
            best = std::move(*placed);
        } else {
            sigma_lo = mid;
        }
    }

    if (config.verify_bracket && sigma_lo > 0) {
        if (probe(sigma_lo))
            throw InternalError("bisection bracket is not tight: sigma_lo re-solved as SAT");
    }

    out.group.entries = std::move(best);
    out.group.sigma = sigma_plus;
    out.group.sigma_lo = sigma_lo;
    return out;
}

Schedule solve_cegar_seq(const Plate& plate, std::span<const PrintObject> objects,
                         const ExtruderProfile& extruder, const CompositeStrategy& strategy,
                         const EngineConfig& config) {
    config.validate();
    if (objects.empty()) throw InstanceError("no objects to schedule");
    const auto started = std::chrono::steady_clock::now();

    Schedule schedule;
    schedule.strategy_name = strategy.name();
    const Point2 anchor = tactic_anchor(strategy.tactic, plate);

    std::vector<PrintObject> remaining(objects.begin(), objects.end());
    while (!remaining.empty()) {
        std::vector<PrintObject> ordered = apply_ordering(strategy.ordering, remaining);

        PlateAssignment assignment;
        assignment.plate_index = static_cast<int>(schedule.plates.size());
        assignment.anchor = anchor;

        std::vector<PrintObject> placed_store; // stable addresses for FixedObject pointers
        placed_store.reserve(ordered.size());
        std::vector<FixedObject> fixed;
        std::size_t next = 0;
        Rational plate_sigma = 0;

        while (next < ordered.size()) {
            const std::size_t want =
                std::min<std::size_t>(static_cast<std::size_t>(config.group_size), ordered.size() - next);
            std::optional<BisectResult> placed;
            std::size_t used = 0;
            for (std::size_t m = want; m > 0; --m) {
                std::span<const PrintObject> group(ordered.data() + next, m);
                try {
                    placed = bisect_sigma(plate, anchor, group, fixed, extruder, config);
                    used = m;
                    break;
                } catch (const InfeasibleAtOne&) {
                    continue; // shrink the group and retry
                }
            }
            if (!placed) {
                if (fixed.empty())
                    throw InstanceError("object '" + ordered[next].id +
                                        "' cannot be placed alone on an empty plate");
                break; // plate full, open a new one
            }
            for (std::size_t i = 0; i < used; ++i) {
                const PlacementEntry& e = placed->group.entries[i];
                placed_store.push_back(ordered[next + i]);
                fixed.push_back({&placed_store.back(), {e.x, e.y}, e.t});
            }
            plate_sigma = std::max(plate_sigma, placed->group.sigma);
            assignment.groups.push_back(std::move(placed->group));
            next += used;
        }

        assignment.sigma = plate_sigma;
        schedule.plates.push_back(std::move(assignment));
        remaining.assign(ordered.begin() + static_cast<std::ptrdiff_t>(next), ordered.end());
    }

    schedule.wall_time =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return schedule;
}

namespace {

struct PlacedView {
    const PrintObject* object;
    Point2 position;
};

} // namespace

std::vector<Violation> verify_schedule(const Schedule& schedule, std::span<const PrintObject> objects,
                                       const ExtruderProfile& extruder, const Plate& plate) {
    std::map<std::string, const PrintObject*> by_id;
    for (const PrintObject& o : objects) {
        if (!by_id.emplace(o.id, &o).second)
            throw std::invalid_argument("duplicate object id '" + o.id + "'");
    }
    std::map<std::string, int> seen;
    for (const PlateAssignment& p : schedule.plates)
        for (const PlacementGroup& g : p.groups)
            for (const PlacementEntry& e : g.entries) seen[e.object_id] += 1;
    if (seen.size() != by_id.size() || schedule.object_count() != objects.size())
        throw std::invalid_argument("schedule does not cover the objects exactly once");
    for (const auto& [id, count] : seen) {
        if (count != 1) throw std::invalid_argument("object '" + id + "' scheduled " +
                                                    std::to_string(count) + " times");
        if (!by_id.count(id)) throw std::invalid_argument("schedule names unknown object '" + id + "'");
    }

    std::vector<Violation> out;
    for (const PlateAssignment& p : schedule.plates) {
        ConvexPolygon sigma_plate = scale_plate(plate, p.sigma, p.anchor);
        std::vector<PlacementEntry> entries = p.ordered_entries();
        std::vector<PlacedView> placed;
        placed.reserve(entries.size());
        for (const PlacementEntry& e : entries)
            placed.push_back({by_id.at(e.object_id), {e.x, e.y}});

        // Printing plate containment (against the plate's sigma-plate).
        for (const PlacedView& pv : placed) {
            const ConvexPolygon& hull = pv.object->footprint;
            bool reported = false;
            for (const Point2& v : hull.vertices()) {
                if (reported) break;
                Point2 world = v + pv.position;
                for (std::size_t e = 0; e < sigma_plate.size(); ++e) {
                    if (sign(orient(sigma_plate.edge_start(e), sigma_plate.edge_end(e), world)) < 0) {
                        out.push_back({Violation::Kind::PlateContainment, p.plate_index, pv.object->id, "",
                                       "vertex (" + decimal_string(world.x) + ", " + decimal_string(world.y) +
                                           ") lies outside sigma-plate edge " + std::to_string(e)});
                        reported = true;
                        break;
                    }
                }
            }
        }

        // Sequential non-collision and extruder traversability, pairwise in
        // print order.
        std::vector<ConvexPolygon> envelopes;
        envelopes.reserve(placed.size());
        for (const PlacedView& pv : placed) envelopes.push_back(envelope_hull(*pv.object, extruder));

        for (std::size_t i = 0; i < placed.size(); ++i) {
            for (std::size_t j = i + 1; j < placed.size(); ++j) {
                if (polygons_overlap(placed[i].object->footprint, placed[i].position, envelopes[j],
                                     placed[j].position)) {
                    out.push_back({Violation::Kind::NonColliding, p.plate_index, placed[i].object->id,
                                   placed[j].object->id,
                                   "hull of earlier object meets the later object's extruder envelope"});
                }
                if (placed[i].object->height >= placed[j].object->height &&
                    polygons_overlap(placed[i].object->footprint, placed[i].position,
                                     placed[j].object->footprint, placed[j].position)) {
                    out.push_back({Violation::Kind::Traversability, p.plate_index, placed[i].object->id,
                                   placed[j].object->id,
                                   "earlier object at least as tall overlaps the later footprint"});
                }
            }
        }
    }
    return out;
}

} // namespace seqpack
