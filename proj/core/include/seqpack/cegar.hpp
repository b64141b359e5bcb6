#pragma once

#include "seqpack/constraints.hpp"
#include "seqpack/solver.hpp"
#include "seqpack/strategy.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace seqpack {

struct EngineConfig {
    Rational eps_t = 1;                  // minimum print-time separation
    Rational eps_xy = Rational(1, 1024); // bisection tolerance on sigma
    int group_size = 4;                  // at most k objects solved at once
    std::chrono::milliseconds bounded_deadline{60000}; // per bounded solve
    int refinement_cap = 0;              // 0: derived from the finite edge-pair bound
    BackendSpec backend = InternalBackend{};
    std::optional<std::filesystem::path> smt_dump_dir;
    std::string smt_dump_prefix;
    bool verify_bracket = false; // re-probe sigma_0 with the final formula after bisection

    void validate() const;
};

struct PlacementEntry {
    std::string object_id;
    Rational x, y; // millimeters
    Rational t;    // order stamp, no physical unit
};

// One solved group with its bisection bracket: sigma is the accepted
// feasible shrink factor, sigma_lo the last infeasible probe (0 if the
// first midpoint already succeeded all the way down).
struct PlacementGroup {
    std::vector<PlacementEntry> entries;
    Rational sigma{1};
    Rational sigma_lo{0};
};

struct PlateAssignment {
    int plate_index = 0;
    std::vector<PlacementGroup> groups;
    // Shrink factor recorded for the plate: the maximum over its groups, so
    // every group's placement is contained in this sigma-plate (plate
    // scaling is monotone in sigma).
    Rational sigma{1};
    Point2 anchor{0, 0};

    // Entries of all groups, ascending print time.
    std::vector<PlacementEntry> ordered_entries() const;
};

struct Schedule {
    std::vector<PlateAssignment> plates;
    std::string strategy_name;
    std::chrono::milliseconds wall_time{0};

    std::size_t object_count() const;
};

struct Violation {
    enum class Kind {
        NonColliding,     // earlier hull meets a later object's extruder envelope
        PlateContainment, // hull vertex outside the sigma-plate
        Traversability,   // earlier object at least as tall overlaps a later footprint
    };

    Kind kind;
    int plate_index;
    std::string object_a;
    std::string object_b; // empty for PlateContainment
    std::string detail;
};

const char* violation_kind_name(Violation::Kind k);

// Dedup memory for lazily added edge-pair constraints; shared across all
// probes of one group so a clause is never asserted twice.
class RefineState {
public:
    // Participants: group members by index, fixed objects as -1-index.
    bool mark(int earlier, int later, std::size_t edge_a, std::size_t edge_b) {
        return added_.emplace(earlier, later, edge_a, edge_b).second;
    }
    std::size_t size() const { return added_.size(); }

private:
    std::set<std::tuple<int, int, std::size_t, std::size_t>> added_;
};

struct BoundedStats {
    int rounds = 0;          // SAT models examined
    int edge_pairs_added = 0;
    bool first_model_refined = false; // the first SAT model contained an intersection
};

// One bounded solve at a fixed sigma-plate: asserts the group's
// Polygon-inside-Polygon clauses, then alternates solving and geometric
// checking. Every returned placement has zero closed edge intersections
// between any earlier hull and any later envelope; violated edge pairs are
// added to the session's base formula (they persist after this call), the
// plate containment clauses do not. Returns nullopt on UNSAT; throws
// SolveTimeout past the deadline and RefinementCapExceeded if the finite
// refinement bound is ever exceeded (which would be a bug).
std::optional<std::vector<PlacementEntry>> solve_bounded(
    SolverSession& session, const ConvexPolygon& sigma_plate, std::span<const PrintObject> group,
    std::span<const FixedObject> fixed, const ExtruderProfile& extruder, const EngineConfig& config,
    RefineState& refine, BoundedStats* stats = nullptr);

struct BisectResult {
    PlacementGroup group;
    int probes = 0;
};

// Feasibility is probed at sigma = 1 first (InfeasibleAtOne if that fails),
// then [sigma_lo, sigma_plus] is bisected until the gap closes below
// eps_xy. Lazily learned constraints persist across probes. The returned
// bracket satisfies: solving at sigma_lo was UNSAT (when > 0), sigma_plus
// is feasible, gap <= eps_xy.
BisectResult bisect_sigma(const Plate& plate, const Point2& anchor, std::span<const PrintObject> group,
                          std::span<const FixedObject> fixed, const ExtruderProfile& extruder,
                          const EngineConfig& config);

// The outer multi-plate loop: orders remaining objects, carves groups of at
// most k off the front, shrinks a failing group one object at a time, and
// opens a fresh plate when even a single object no longer fits. Throws
// InstanceError when one object fails alone on an empty plate and
// SolveTimeout when a bounded solve exceeds its deadline.
Schedule solve_cegar_seq(const Plate& plate, std::span<const PrintObject> objects,
                         const ExtruderProfile& extruder, const CompositeStrategy& strategy,
                         const EngineConfig& config);

// Independent exact check of a schedule, no solver involved: sequential
// non-collision (earlier hull vs later envelope), containment in the
// plate's sigma-plate, and extruder traversability reduced to footprints
// (an earlier object at least as tall must not overlap a later footprint).
// Returns an empty list iff the schedule is clean. Throws
// std::invalid_argument if the schedule does not cover exactly the given
// objects.
std::vector<Violation> verify_schedule(const Schedule& schedule, std::span<const PrintObject> objects,
                                       const ExtruderProfile& extruder, const Plate& plate);

} // namespace seqpack
