#include "seqpack/formula.hpp"

#include "seqpack/errors.hpp"

#include <algorithm>
#include <charconv>

namespace seqpack {

std::string var_name(const VarId& v) {
    static const char* prefix[] = {"X_", "Y_", "T_"};
    return prefix[static_cast<int>(v.kind)] + std::to_string(v.object_index);
}

std::optional<VarId> var_from_name(std::string_view name) {
    if (name.size() < 3 || name[1] != '_') return std::nullopt;
    VarKind kind;
    switch (name[0]) {
        case 'X': kind = VarKind::X; break;
        case 'Y': kind = VarKind::Y; break;
        case 'T': kind = VarKind::T; break;
        default: return std::nullopt;
    }
    int idx = 0;
    auto digits = name.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || idx < 0) return std::nullopt;
    return VarId{kind, idx};
}

Clause::Clause(std::vector<LinIneq> ds) : disjuncts(std::move(ds)) {
    if (disjuncts.empty()) throw InternalError("empty clause constructed");
    std::vector<LinIneq> unique;
    unique.reserve(disjuncts.size());
    for (auto& d : disjuncts) {
        if (std::find(unique.begin(), unique.end(), d) == unique.end()) unique.push_back(std::move(d));
    }
    disjuncts = std::move(unique);
}

void Formula::add(Clause clause) {
    for (const LinIneq& d : clause.disjuncts)
        for (const auto& [v, c] : d.coeffs) variables_.insert(v);
    clauses_.push_back(std::move(clause));
}

void Formula::add_all(const std::vector<Clause>& clauses) {
    for (const Clause& c : clauses) add(c);
}

bool eval(const LinIneq& atom, const Assignment& a) {
    Rational lhs = 0;
    for (const auto& [v, c] : atom.coeffs) lhs += c * a.at(v);
    return atom.strict ? lhs < atom.bound : lhs <= atom.bound;
}

bool eval(const Clause& clause, const Assignment& a) {
    for (const LinIneq& d : clause.disjuncts)
        if (eval(d, a)) return true;
    return false;
}

bool eval(const Formula& f, const Assignment& a) {
    for (const Clause& c : f.clauses())
        if (!eval(c, a)) return false;
    return true;
}

LinExpr LinExpr::operator+(const LinExpr& o) const {
    LinExpr r = *this;
    r.constant += o.constant;
    for (const auto& [v, c] : o.coeffs) {
        auto [it, inserted] = r.coeffs.try_emplace(v, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) r.coeffs.erase(it);
        }
    }
    return r;
}

LinExpr LinExpr::operator-(const LinExpr& o) const {
    return *this + o * Rational(-1);
}

LinExpr LinExpr::operator*(const Rational& k) const {
    LinExpr r;
    r.constant = constant * k;
    if (k == 0) return r;
    for (const auto& [v, c] : coeffs) r.coeffs.emplace(v, c * k);
    return r;
}

std::optional<LinIneq> ineq_le_zero(const LinExpr& e, bool strict, bool* constant_truth) {
    if (e.coeffs.empty()) {
        bool truth = strict ? e.constant < 0 : e.constant <= 0;
        if (!constant_truth) throw InternalError("constant inequality where an atom was required");
        *constant_truth = truth;
        return std::nullopt;
    }
    LinIneq atom;
    atom.coeffs = e.coeffs;
    atom.bound = -e.constant;
    atom.strict = strict;
    return atom;
}

} // namespace seqpack
