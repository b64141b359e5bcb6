#pragma once

#include "seqpack/rational.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace seqpack {

// a + b*delta for a symbolic infinitesimal delta > 0; lexicographic order.
// Strict bounds become non-strict bounds on these values (x < c turns into
// x <= c - delta), which lets one simplex handle mixed strict/non-strict
// systems exactly.
struct DeltaRational {
    Rational real;
    Rational delta;

    DeltaRational() : real(0), delta(0) {}
    DeltaRational(Rational r, Rational d) : real(std::move(r)), delta(std::move(d)) {}

    bool operator==(const DeltaRational&) const = default;
    bool operator<(const DeltaRational& o) const {
        if (real != o.real) return real < o.real;
        return delta < o.delta;
    }
    bool operator<=(const DeltaRational& o) const { return *this < o || *this == o; }
    bool operator>(const DeltaRational& o) const { return o < *this; }
    bool operator>=(const DeltaRational& o) const { return o <= *this; }

    DeltaRational operator+(const DeltaRational& o) const { return {real + o.real, delta + o.delta}; }
    DeltaRational operator-(const DeltaRational& o) const { return {real - o.real, delta - o.delta}; }
    DeltaRational scaled(const Rational& k) const { return {real * k, delta * k}; }
};

// Wall-clock budget shared by the search and the simplex; checked on a
// coarse grain so the clock is not read per pivot.
class SolveBudget {
public:
    SolveBudget() = default;
    explicit SolveBudget(std::optional<std::chrono::steady_clock::time_point> deadline)
        : deadline_(deadline) {}

    // True when past the deadline; samples the clock every 256 calls.
    bool expired() {
        if (!deadline_) return false;
        if ((++ops_ & 0xffu) != 0) return false;
        return std::chrono::steady_clock::now() >= *deadline_;
    }

private:
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint64_t ops_ = 0;
};

// Incremental exact simplex over delta-rationals in the style of the
// DPLL(T) arithmetic solvers: variables carry optional lower/upper bounds
// and a current value; basic variables are defined by tableau rows over the
// nonbasic ones. Bland's rule (smallest index everywhere) guarantees
// termination and makes every run deterministic.
//
// Every asserted bound carries a caller-chosen level tag. When a bound or a
// check fails, last_conflict() lists the level tags of the bounds the
// infeasibility is built from, which is what lets the search above jump
// over decision levels that played no part in a conflict.
class Simplex {
public:
    explicit Simplex(int num_problem_vars);

    // Adds a basic slack variable defined as the given linear form over
    // problem variables (entries sorted by index, no zero coefficients).
    // Must be called before any assert/check.
    int add_slack(std::vector<std::pair<int, Rational>> form);

    int num_vars() const { return static_cast<int>(vars_.size()); }

    void push();
    void pop();

    // Tighten a bound. Returns false iff it immediately contradicts the
    // opposite bound; the state is unchanged then and last_conflict() holds
    // the level of that opposite bound.
    [[nodiscard]] bool assert_upper(int var, const DeltaRational& b, int level);
    [[nodiscard]] bool assert_lower(int var, const DeltaRational& b, int level);

    // Restores all basic variables into their bounds, or reports
    // infeasibility with last_conflict() filled. Throws SolveTimeout past
    // the budget.
    [[nodiscard]] bool check(SolveBudget& budget);

    const std::vector<int>& last_conflict() const { return conflict_levels_; }

    // Concrete rational values for all variables: delta is replaced by half
    // the smallest positive slack that any bound leaves it, so every strict
    // bound stays strictly satisfied.
    std::vector<Rational> concretize() const;

    // Whether the current assignment already satisfies this bound; used to
    // steer disjunct choice towards what the model does for free.
    bool satisfied(int var, bool is_upper, const DeltaRational& b) const {
        const DeltaRational& v = vars_[static_cast<std::size_t>(var)].value;
        return is_upper ? v <= b : v >= b;
    }

private:
    struct VarState {
        std::optional<DeltaRational> lower;
        std::optional<DeltaRational> upper;
        int lower_level = -1;
        int upper_level = -1;
        DeltaRational value;
        int row = -1; // index into rows_ when basic, -1 when nonbasic
    };

    using Row = std::vector<std::pair<int, Rational>>; // sorted by var index

    struct TrailEntry {
        int var;
        bool is_upper;
        std::optional<DeltaRational> old_bound;
        int old_level;
    };

    bool is_basic(int v) const { return vars_[static_cast<std::size_t>(v)].row >= 0; }
    const Rational* row_coeff(const Row& row, int var) const;
    void update_nonbasic(int var, const DeltaRational& v);
    void pivot_and_update(int basic_var, int entering, const DeltaRational& target);

    std::vector<VarState> vars_;
    std::vector<Row> rows_;
    std::vector<int> row_basic_; // basic variable of each row
    std::vector<TrailEntry> trail_;
    std::vector<std::size_t> marks_;
    std::vector<int> conflict_levels_;
    bool frozen_ = false; // no add_slack after first assert
};

} // namespace seqpack
