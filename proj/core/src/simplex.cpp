#include "seqpack/simplex.hpp"

#include "seqpack/errors.hpp"

#include <algorithm>

namespace seqpack {

Simplex::Simplex(int num_problem_vars) {
    vars_.resize(static_cast<std::size_t>(num_problem_vars));
}

int Simplex::add_slack(std::vector<std::pair<int, Rational>> form) {
    if (frozen_) throw InternalError("add_slack after asserts began");
    const int var = num_vars();
    vars_.emplace_back();
    vars_.back().row = static_cast<int>(rows_.size());
    rows_.push_back(std::move(form));
    row_basic_.push_back(var);
    return var;
}

const Rational* Simplex::row_coeff(const Row& row, int var) const {
    auto it = std::lower_bound(row.begin(), row.end(), var,
                               [](const auto& e, int v) { return e.first < v; });
    if (it != row.end() && it->first == var) return &it->second;
    return nullptr;
}

void Simplex::update_nonbasic(int var, const DeltaRational& v) {
    DeltaRational diff = v - vars_[static_cast<std::size_t>(var)].value;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (const Rational* c = row_coeff(rows_[r], var))
            vars_[static_cast<std::size_t>(row_basic_[r])].value =
                vars_[static_cast<std::size_t>(row_basic_[r])].value + diff.scaled(*c);
    }
    vars_[static_cast<std::size_t>(var)].value = v;
}

void Simplex::push() {
    frozen_ = true;
    marks_.push_back(trail_.size());
}

void Simplex::pop() {
    if (marks_.empty()) throw InternalError("simplex pop without push");
    std::size_t mark = marks_.back();
    marks_.pop_back();
    while (trail_.size() > mark) {
        TrailEntry& e = trail_.back();
        auto& vs = vars_[static_cast<std::size_t>(e.var)];
        (e.is_upper ? vs.upper : vs.lower) = e.old_bound;
        (e.is_upper ? vs.upper_level : vs.lower_level) = e.old_level;
        trail_.pop_back();
    }
}

bool Simplex::assert_upper(int var, const DeltaRational& b, int level) {
    frozen_ = true;
    auto& vs = vars_[static_cast<std::size_t>(var)];
    if (vs.upper && *vs.upper <= b) return true;
    if (vs.lower && b < *vs.lower) {
        conflict_levels_.assign(1, vs.lower_level);
        return false;
    }
    trail_.push_back({var, true, vs.upper, vs.upper_level});
    vs.upper = b;
    vs.upper_level = level;
    if (!is_basic(var) && vs.value > b) update_nonbasic(var, b);
    return true;
}

bool Simplex::assert_lower(int var, const DeltaRational& b, int level) {
    frozen_ = true;
    auto& vs = vars_[static_cast<std::size_t>(var)];
    if (vs.lower && *vs.lower >= b) return true;
    if (vs.upper && b > *vs.upper) {
        conflict_levels_.assign(1, vs.upper_level);
        return false;
    }
    trail_.push_back({var, false, vs.lower, vs.lower_level});
    vs.lower = b;
    vs.lower_level = level;
    if (!is_basic(var) && vs.value < b) update_nonbasic(var, b);
    return true;
}

void Simplex::pivot_and_update(int basic_var, int entering, const DeltaRational& target) {
    const int r = vars_[static_cast<std::size_t>(basic_var)].row;
    Row& row = rows_[static_cast<std::size_t>(r)];
    const Rational a = *row_coeff(row, entering);

    DeltaRational theta = (target - vars_[static_cast<std::size_t>(basic_var)].value).scaled(1 / a);
    vars_[static_cast<std::size_t>(basic_var)].value = target;
    vars_[static_cast<std::size_t>(entering)].value =
        vars_[static_cast<std::size_t>(entering)].value + theta;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (static_cast<int>(k) == r) continue;
        if (const Rational* c = row_coeff(rows_[k], entering))
            vars_[static_cast<std::size_t>(row_basic_[k])].value =
                vars_[static_cast<std::size_t>(row_basic_[k])].value + theta.scaled(*c);
    }

    // Re-express the row as a definition of the entering variable:
    //   basic = sum a_j x_j  ==>  entering = basic/a - sum_{j != e} (a_j/a) x_j
    Row def;
    def.reserve(row.size());
    for (const auto& [j, c] : row) {
        if (j == entering) continue;
        def.emplace_back(j, -c / a);
    }
    def.emplace_back(basic_var, 1 / a);
    std::sort(def.begin(), def.end(), [](const auto& l, const auto& rgt) { return l.first < rgt.first; });
    row = def;
    row_basic_[static_cast<std::size_t>(r)] = entering;
    vars_[static_cast<std::size_t>(entering)].row = r;
    vars_[static_cast<std::size_t>(basic_var)].row = -1;

    // Substitute the definition into every other row that mentions the
    // entering variable.
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (static_cast<int>(k) == r) continue;
        Row& other = rows_[k];
        const Rational* cp = row_coeff(other, entering);
        if (!cp) continue;
        Rational c = *cp;
        Row merged;
        merged.reserve(other.size() + def.size());
        auto it = other.begin();
        auto jt = def.begin();
        while (it != other.end() || jt != def.end()) {
            if (jt == def.end() || (it != other.end() && it->first < jt->first)) {
                if (it->first != entering) merged.push_back(*it);
                ++it;
            } else if (it == other.end() || jt->first < it->first) {
                merged.emplace_back(jt->first, c * jt->second);
                ++jt;
            } else {
                if (it->first == entering) throw InternalError("entering variable in its own definition");
                Rational sum = it->second + c * jt->second;
                if (sum != 0) merged.emplace_back(it->first, std::move(sum));
                ++it;
                ++jt;
            }
        }
        other = std::move(merged);
    }
}

bool Simplex::check(SolveBudget& budget) {
    for (;;) {
        if (budget.expired()) throw SolveTimeout("simplex ran past its deadline");

        // Bland: smallest-index violated basic variable.
        int bad = -1;
        bool below = false;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            int v = row_basic_[r];
            const auto& vs = vars_[static_cast<std::size_t>(v)];
            if (vs.lower && vs.value < *vs.lower) {
                if (bad < 0 || v < bad) {
                    bad = v;
                    below = true;
                }
            } else if (vs.upper && vs.value > *vs.upper) {
                if (bad < 0 || v < bad) {
                    bad = v;
                    below = false;
                }
            }
        }
        if (bad < 0) return true;

        const Row& row = rows_[static_cast<std::size_t>(vars_[static_cast<std::size_t>(bad)].row)];
        int entering = -1;
        for (const auto& [j, a] : row) { // sorted: first admissible is Bland's choice
            const auto& js = vars_[static_cast<std::size_t>(j)];
            bool can_increase = !js.upper || js.value < *js.upper;
            bool can_decrease = !js.lower || js.value > *js.lower;
            bool admissible = below ? ((a > 0 && can_increase) || (a < 0 && can_decrease))
                                    : ((a > 0 && can_decrease) || (a < 0 && can_increase));
            if (admissible) {
                entering = j;
                break;
            }
        }
        if (entering < 0) {
            // Infeasible. The proof is the violated bound of the basic
            // variable plus the bound every nonbasic row member is pinned
            // at; report their level tags.
            const auto& bs = vars_[static_cast<std::size_t>(bad)];
            conflict_levels_.clear();
            conflict_levels_.push_back(below ? bs.lower_level : bs.upper_level);
            for (const auto& [j, a] : row) {
                const auto& js = vars_[static_cast<std::size_t>(j)];
                bool cite_upper = below ? a > 0 : a < 0;
                conflict_levels_.push_back(cite_upper ? js.upper_level : js.lower_level);
            }
            return false;
        }

        const auto& bs = vars_[static_cast<std::size_t>(bad)];
        pivot_and_update(bad, entering, below ? *bs.lower : *bs.upper);
    }
}

std::vector<Rational> Simplex::concretize() const {
    // delta must stay below the slack every bound leaves; halve the minimum.
    Rational delta_cap = 1;
    bool constrained = false;
    auto consider = [&](const Rational& num, const Rational& den) {
        // require delta < num/den with num > 0, den > 0
        Rational limit = num / den;
        if (!constrained || limit < delta_cap) delta_cap = limit;
        constrained = true;
    };
    for (const auto& vs : vars_) {
        if (vs.lower) {
            Rational dr = vs.value.real - vs.lower->real;
            Rational dd = vs.lower->delta - vs.value.delta;
            if (dr > 0 && dd > 0) consider(dr, dd);
        }
        if (vs.upper) {
            Rational dr = vs.upper->real - vs.value.real;
            Rational dd = vs.value.delta - vs.upper->delta;
            if (dr > 0 && dd > 0) consider(dr, dd);
        }
    }
    Rational delta = constrained ? delta_cap / 2 : Rational(1);
    if (delta > 1) delta = 1;

    std::vector<Rational> out;
    out.reserve(vars_.size());
    for (const auto& vs : vars_) out.push_back(vs.value.real + vs.value.delta * delta);
    return out;
}

} // namespace seqpack
