#pragma once

#include "seqpack/formula.hpp"
#include "seqpack/solver.hpp"

#include <string>
#include <string_view>

namespace seqpack {

// QF_LRA text for the formula, in the fixed token grammar documented in
// docs/smtlib-grammar.md: sorted declarations, one assert per clause as an
// `or` of atoms, rational constants as integer numerals or (/ p q), then
// check-sat and get-model.
std::string emit_smtlib(const Formula& f);

// Parses a get-model response (the s-expression list of define-fun entries,
// optionally wrapped in `(model ...)`) into exact rational values. Values
// may be integer or decimal numerals, (- v), or (/ v v); anything else (for
// example algebraic irrationals) raises ParseError naming the fragment.
Assignment parse_model(std::string_view text);

// Interprets complete solver stdout: first token sat/unsat/unknown, then a
// model for sat. Garbled output raises BackendError.
SolveResult parse_solver_output(std::string_view text);

// Parser for exactly the grammar emit_smtlib produces (plus whitespace and
// line comments). Powers the `seqpack smt-check` reference backend so the
// external-solver bridge can be exercised without a third-party solver.
Formula parse_smtlib(std::string_view text);

// SMT-LIB2 numeral for an exact rational: n, (- n), (/ n m) or (- (/ n m)).
std::string smtlib_numeral(const Rational& r);

// A full get-model response for the assignment, one define-fun per
// variable, in VarId order.
std::string model_to_smtlib(const Assignment& model);

} // namespace seqpack
