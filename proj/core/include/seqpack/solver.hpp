#pragma once

#include "seqpack/formula.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace seqpack {

enum class SolveStatus { Sat, Unsat, Timeout };

struct SolveResult {
    SolveStatus status;
    std::optional<Assignment> model; // present iff Sat

    bool sat() const { return status == SolveStatus::Sat; }
};

// Reference backend: depth-first branching over clause disjuncts with unit
// propagation falling out of the ascending-size clause order; each branch's
// conjunction is decided by the exact simplex. Deterministic: fixed clause
// order, disjuncts tried in emission order, Bland pivoting.
SolveResult internal_decide(const Formula& f,
                            std::optional<std::chrono::steady_clock::time_point> deadline = {});

struct InternalBackend {};
struct ExternalBackend {
    std::string command; // shell command reading SMT-LIB2 on stdin
};
using BackendSpec = std::variant<InternalBackend, ExternalBackend>;

BackendSpec backend_from_string(const std::string& spec); // "internal" | "external:<command>"
std::string backend_to_string(const BackendSpec& spec);

// Runs the command with the given text on standard input and returns its
// standard output. Throws BackendError on spawn failure or nonzero exit.
std::string run_external_process(const std::string& command, const std::string& input);

// One solver conversation: a growing set of asserted clauses with stacked
// checkpoints. Each solve() call is one-shot against the current clause set
// (no incremental protocol towards external solvers); popping restores
// exactly the clause set at the matching push.
class SolverSession {
public:
    explicit SolverSession(BackendSpec backend = InternalBackend{},
                           std::optional<std::chrono::steady_clock::time_point> deadline = {});

    // Wall-clock point after which internal solves return Timeout. Spans as
    // many solve() calls as the caller runs against it.
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) {
        deadline_ = deadline;
    }

    void assert_clause(Clause c);
    void assert_clauses(const std::vector<Clause>& cs);
    void declare(const VarId& v);
    void push();
    void pop();

    const Formula& formula() const { return formula_; }
    const BackendSpec& backend() const { return backend_; }

    // When set, every solve() writes the emitted SMT-LIB2 problem to
    // <dir>/<prefix><counter>.smt2 regardless of backend.
    void set_dump(std::filesystem::path dir, std::string prefix);

    // SAT results are re-evaluated against the formula with the exact
    // evaluator before being returned; a model that fails this check raises
    // BackendError (external) or InternalError (internal backend).
    SolveResult solve();

private:
    struct Checkpoint {
        std::size_t clause_count;
        std::set<VarId> variables;
    };

    SolveResult solve_external(const ExternalBackend& ext);
    void maybe_dump();

    BackendSpec backend_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    Formula formula_;
    std::vector<Checkpoint> checkpoints_;
    std::optional<std::filesystem::path> dump_dir_;
    std::string dump_prefix_;
    int dump_counter_ = 0;
};

} // namespace seqpack
