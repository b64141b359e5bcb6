#pragma once

#include "seqpack/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace seqpack {

// Decision variables: X_i, Y_i locate object i, T_i orders it in time.
enum class VarKind : int { X = 0, Y = 1, T = 2 };

struct VarId {
    VarKind kind;
    int object_index;

    auto operator<=>(const VarId&) const = default;
};

std::string var_name(const VarId& v);                  // "X_3"
std::optional<VarId> var_from_name(std::string_view);  // inverse of var_name

using Assignment = std::map<VarId, Rational>;

// sum(coeffs[v] * v) REL bound, REL one of {<, <=}. Coefficients are never
// zero and the map is never empty; constant-valued inequalities are
// simplified away where they arise.
struct LinIneq {
    std::map<VarId, Rational> coeffs;
    Rational bound;
    bool strict = false; // true: <, false: <=

    bool operator==(const LinIneq&) const = default;
};

// Disjunction of inequalities. Never empty; duplicate disjuncts are removed
// on construction.
struct Clause {
    explicit Clause(std::vector<LinIneq> disjuncts);

    std::vector<LinIneq> disjuncts;

    bool operator==(const Clause&) const = default;
};

// Conjunction of clauses over the variables they mention.
class Formula {
public:
    void add(Clause clause);
    void add_all(const std::vector<Clause>& clauses);
    // Registers a variable even if no clause mentions it yet (a lone object
    // has unconstrained X/Y that still need values in a model).
    void declare(const VarId& v) { variables_.insert(v); }

    const std::vector<Clause>& clauses() const { return clauses_; }
    const std::set<VarId>& variables() const { return variables_; }

private:
    std::vector<Clause> clauses_;
    std::set<VarId> variables_;
};

// Exact evaluation, independent of any solver bookkeeping. Throws
// std::out_of_range if a referenced variable is unassigned.
bool eval(const LinIneq& atom, const Assignment& a);
bool eval(const Clause& clause, const Assignment& a);
bool eval(const Formula& f, const Assignment& a);

// Affine form used while building atoms; placed coordinates become
// (constant + variable) pairs and cross products stay linear because edge
// vectors are constant.
struct LinExpr {
    std::map<VarId, Rational> coeffs;
    Rational constant = 0;

    static LinExpr of(const Rational& c) { return {{}, c}; }
    static LinExpr var(const VarId& v) { return {{{v, 1}}, 0}; }

    LinExpr operator+(const LinExpr& o) const;
    LinExpr operator-(const LinExpr& o) const;
    LinExpr operator*(const Rational& k) const;
};

// expr REL 0 as a LinIneq (moves the constant to the bound side). If the
// expression mentions no variable the comparison is a constant: its truth is
// stored through constant_truth and nullopt is returned. Passing nullptr
// there means the caller cannot handle constants, and InternalError is
// thrown instead.
std::optional<LinIneq> ineq_le_zero(const LinExpr& e, bool strict, bool* constant_truth = nullptr);

} // namespace seqpack
