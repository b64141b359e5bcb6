#include "seqpack/solver.hpp"

#include "seqpack/errors.hpp"
#include "seqpack/simplex.hpp"
#include "seqpack/smtlib.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>

#include <unistd.h>

namespace seqpack {

namespace {

// One disjunct resolved against the simplex variable layout: a bound on a
// single simplex variable.
struct ResolvedAtom {
    int var;
    bool is_upper;
    DeltaRational bound;
};

struct CompiledFormula {
    std::vector<VarId> var_order;            // problem variables, sorted
    Simplex simplex;                          // problem vars + slacks
    std::vector<std::vector<ResolvedAtom>> clauses; // sorted by size, stable
};

CompiledFormula compile(const Formula& f) {
    std::vector<VarId> order(f.variables().begin(), f.variables().end());
    std::map<VarId, int> index;
    for (std::size_t i = 0; i < order.size(); ++i) index.emplace(order[i], static_cast<int>(i));

    CompiledFormula out{std::move(order), Simplex(static_cast<int>(index.size())), {}};

    // One slack per distinct normalized multi-variable form. A form is
    // normalized by dividing through the leading coefficient, which also
    // decides whether an atom is an upper or a lower bound on it.
    std::map<std::vector<std::pair<int, Rational>>, int> slack_of_form;

    auto resolve = [&](const LinIneq& atom) -> ResolvedAtom {
        std::vector<std::pair<int, Rational>> term;
        term.reserve(atom.coeffs.size());
        for (const auto& [v, c] : atom.coeffs) term.emplace_back(index.at(v), c);
        std::sort(term.begin(), term.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

        Rational lead = term.front().second;
        std::vector<std::pair<int, Rational>> form;
        form.reserve(term.size());
        for (const auto& [v, c] : term) form.emplace_back(v, c / lead);

        int var;
        if (form.size() == 1) {
            var = form.front().first; // coefficient is exactly 1
        } else {
            auto it = slack_of_form.find(form);
            if (it == slack_of_form.end())
                it = slack_of_form.emplace(form, out.simplex.add_slack(form)).first;
            var = it->second;
        }

        Rational bound = atom.bound / lead;
        if (lead > 0) return {var, true, {bound, atom.strict ? Rational(-1) : Rational(0)}};
        return {var, false, {bound, atom.strict ? Rational(1) : Rational(0)}};
    };

    std::vector<std::vector<ResolvedAtom>> clauses;
    clauses.reserve(f.clauses().size());
    for (const Clause& c : f.clauses()) {
        std::vector<ResolvedAtom> ra;
        ra.reserve(c.disjuncts.size());
        for (const LinIneq& d : c.disjuncts) ra.push_back(resolve(d));
        clauses.push_back(std::move(ra));
    }
    std::stable_sort(clauses.begin(), clauses.end(),
                     [](const auto& a, const auto& b) { return a.size() < b.size(); });
    out.clauses = std::move(clauses);
    return out;
}

// Level set for conflict-directed backjumping: which decision levels
// (clause indices) an infeasibility proof rests on.
class LevelSet {
public:
    void resize(std::size_t levels) { words_.assign((levels + 63) / 64, 0); }
    void clear() { std::fill(words_.begin(), words_.end(), 0); }
    void set(int level) {
        if (level >= 0) words_[static_cast<std::size_t>(level) >> 6] |= 1ull << (level & 63);
    }
    void unset(int level) {
        if (level >= 0) words_[static_cast<std::size_t>(level) >> 6] &= ~(1ull << (level & 63));
    }
    bool test(int level) const {
        return level >= 0 && (words_[static_cast<std::size_t>(level) >> 6] >> (level & 63)) & 1;
    }
    void merge(const LevelSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    }
    void assign(const LevelSet& o) { words_ = o.words_; }

private:
    std::vector<std::uint64_t> words_;
};

// Depth-first search over clause disjuncts, one decision level per clause.
// Failed subtrees report the set of levels their infeasibility proofs cite;
// when a subtree fails without citing the current level, its siblings
// cannot help either and the search jumps straight over the level. No
// clauses are learned.
class DfsSearch {
public:
    DfsSearch(CompiledFormula& cf, SolveBudget& budget) : cf_(cf), budget_(budget) {
        fail_.resize(cf.clauses.size() + 1);
        for (LevelSet& f : fail_) f.resize(cf.clauses.size());
    }

    // SAT iff some choice of one disjunct per clause is feasible.
    bool run() { return descend(0); }

private:
    bool descend(std::size_t clause_idx) {
        if (budget_.expired()) throw SolveTimeout("search ran past its deadline");
        if (clause_idx == cf_.clauses.size()) return true;
        const std::vector<ResolvedAtom>& clause = cf_.clauses[clause_idx];
        const int level = static_cast<int>(clause_idx);
        LevelSet& fail = fail_[clause_idx];
        fail.clear();

        // Try a disjunct the current assignment already satisfies first:
        // asserting it cannot disturb anything placed so far. The remaining
        // disjuncts follow in emission order. Deterministic, since the
        // assignment evolves deterministically.
        std::size_t preferred = clause.size();
        for (std::size_t d = 0; d < clause.size(); ++d) {
            if (cf_.simplex.satisfied(clause[d].var, clause[d].is_upper, clause[d].bound)) {
                preferred = d;
                break;
            }
        }
        for (std::size_t step = 0; step <= clause.size(); ++step) {
            std::size_t d;
            if (step == 0) {
                if (preferred == clause.size()) continue;
                d = preferred;
            } else {
                d = step - 1;
                if (d == preferred) continue;
            }
            const ResolvedAtom& atom = clause[d];
            cf_.simplex.push();
            bool ok = atom.is_upper ? cf_.simplex.assert_upper(atom.var, atom.bound, level)
                                    : cf_.simplex.assert_lower(atom.var, atom.bound, level);
            if (!ok) {
                for (int l : cf_.simplex.last_conflict()) fail.set(l);
                cf_.simplex.pop();
                continue; // the conflict cites this disjunct's own bound
            }
            if (!cf_.simplex.check(budget_)) {
                cf_.simplex.pop();
                bool cites_self = false;
                for (int l : cf_.simplex.last_conflict()) {
                    if (l == level) cites_self = true;
                }
                if (!cites_self) {
                    // Already infeasible before this level's choice.
                    fail.clear();
                    for (int l : cf_.simplex.last_conflict()) fail.set(l);
                    return false;
                }
                for (int l : cf_.simplex.last_conflict()) fail.set(l);
                continue;
            }
            if (descend(clause_idx + 1)) return true;
            cf_.simplex.pop();
            const LevelSet& child = fail_[clause_idx + 1];
            if (!child.test(level)) {
                fail.assign(child);
                return false; // jump: this level's choice played no part
            }
            fail.merge(child);
        }
        fail.unset(level);
        return false;
    }

    CompiledFormula& cf_;
    SolveBudget& budget_;
    std::vector<LevelSet> fail_;
};

} // namespace

SolveResult internal_decide(const Formula& f,
                            std::optional<std::chrono::steady_clock::time_point> deadline) {
    CompiledFormula cf = compile(f);
    SolveBudget budget(deadline);
    try {
        if (!DfsSearch(cf, budget).run()) return {SolveStatus::Unsat, std::nullopt};
    } catch (const SolveTimeout&) {
        return {SolveStatus::Timeout, std::nullopt};
    }
    std::vector<Rational> values = cf.simplex.concretize();
    Assignment model;
    for (std::size_t i = 0; i < cf.var_order.size(); ++i) model[cf.var_order[i]] = values[i];
    if (!eval(f, model)) throw InternalError("internal backend produced a model that fails re-evaluation");
    return {SolveStatus::Sat, std::move(model)};
}

BackendSpec backend_from_string(const std::string& spec) {
    if (spec == "internal") return InternalBackend{};
    const std::string prefix = "external:";
    if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size())
        return ExternalBackend{spec.substr(prefix.size())};
    throw ParseError("backend must be 'internal' or 'external:<command>', got '" + spec + "'");
}

std::string backend_to_string(const BackendSpec& spec) {
    if (std::holds_alternative<InternalBackend>(spec)) return "internal";
    return "external:" + std::get<ExternalBackend>(spec).command;
}

std::string run_external_process(const std::string& command, const std::string& input) {
    // Write the problem to a temp file and feed it via shell redirection;
    // this cannot deadlock on pipe buffers no matter how the child
    // interleaves reading and writing.
    std::filesystem::path dir = std::filesystem::temp_directory_path();
    static std::atomic<unsigned> counter{0};
    std::filesystem::path file =
        dir / ("seqpack-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".smt2");
    {
        std::ofstream out(file);
        if (!out) throw BackendError("cannot create temp file " + file.string());
        out << input;
    }
    std::string full = command + " < '" + file.string() + "'";
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) {
        std::filesystem::remove(file);
        throw BackendError("failed to spawn external solver: " + std::string(std::strerror(errno)));
    }
    std::string output;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    int status = ::pclose(pipe);
    std::filesystem::remove(file);
    if (status != 0)
        throw BackendError("external solver exited with status " + std::to_string(status) +
                           (output.empty() ? "" : "; output: " + output.substr(0, 200)));
    return output;
}

SolverSession::SolverSession(BackendSpec backend,
                             std::optional<std::chrono::steady_clock::time_point> deadline)
    : backend_(std::move(backend)), deadline_(deadline) {}

void SolverSession::assert_clause(Clause c) {
    formula_.add(std::move(c));
}

void SolverSession::assert_clauses(const std::vector<Clause>& cs) {
    formula_.add_all(cs);
}

void SolverSession::declare(const VarId& v) {
    formula_.declare(v);
}

void SolverSession::push() {
    checkpoints_.push_back({formula_.clauses().size(), formula_.variables()});
}

void SolverSession::pop() {
    if (checkpoints_.empty()) throw InternalError("session pop without push");
    Checkpoint cp = std::move(checkpoints_.back());
    checkpoints_.pop_back();
    Formula restored;
    for (std::size_t i = 0; i < cp.clause_count; ++i) restored.add(formula_.clauses()[i]);
    for (const VarId& v : cp.variables) restored.declare(v);
    formula_ = std::move(restored);
}

void SolverSession::set_dump(std::filesystem::path dir, std::string prefix) {
    std::filesystem::create_directories(dir);
    dump_dir_ = std::move(dir);
    dump_prefix_ = std::move(prefix);
}

void SolverSession::maybe_dump() {
    if (!dump_dir_) return;
    char name[32];
    std::snprintf(name, sizeof name, "%04d.smt2", dump_counter_++);
    std::ofstream out(*dump_dir_ / (dump_prefix_ + name));
    out << emit_smtlib(formula_);
}

SolveResult SolverSession::solve() {
    maybe_dump();
    if (std::holds_alternative<InternalBackend>(backend_)) return internal_decide(formula_, deadline_);
    return solve_external(std::get<ExternalBackend>(backend_));
}

SolveResult SolverSession::solve_external(const ExternalBackend& ext) {
    std::string output = run_external_process(ext.command, emit_smtlib(formula_));
    SolveResult result = parse_solver_output(output);
    if (result.sat()) {
        // Complete the model (solvers may omit don't-care variables), then
        // verify it; a claimed sat whose model fails exact re-evaluation is
        // a backend failure, not a verdict.
        Assignment& model = *result.model;
        for (const VarId& v : formula_.variables()) model.try_emplace(v, 0);
        if (!eval(formula_, model))
            throw BackendError("external solver returned sat with a model that fails re-evaluation");
    }
    return result;
}

} // namespace seqpack
