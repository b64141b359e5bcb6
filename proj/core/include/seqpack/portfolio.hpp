#pragma once

#include "seqpack/cegar.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqpack {

enum class PortfolioKind { Center, Ordering, Tactic, Combined };

PortfolioKind portfolio_kind_from_string(const std::string& name);
const char* portfolio_kind_name(PortfolioKind kind);

struct PortfolioSetup {
    PortfolioKind kind;
    std::vector<CompositeStrategy> strategies;
};

// The four setups:
//   Center   - the single Center/Height-Input strategy (the baseline)
//   Ordering - all four orderings with the Center tactic
//   Tactic   - all five tactics with Height-Input ordering
//   Combined - the full 5 x 4 product
// Height-Random seeds are mixed from the global seed and the strategy's
// stable position in the full product, so a strategy behaves identically in
// every setup that contains it. That makes "a larger setup never does
// worse" hold instance-wise, not just in expectation.
PortfolioSetup make_setup(PortfolioKind kind, std::uint64_t global_seed);

struct StrategyOutcome {
    std::string strategy_name;
    std::optional<Schedule> schedule; // empty on failure
    std::string failure;              // empty on success
    bool timed_out = false;
    bool instance_error = false;
};

struct PortfolioResult {
    Schedule best;
    std::vector<StrategyOutcome> outcomes; // in setup order
};

// Deterministic best answer: fewest plates, then smallest sum of per-plate
// sigma, then strategy name. Requires at least one answer.
const Schedule& select_best(std::span<const Schedule> answers);

// Runs one solve_cegar_seq per strategy concurrently (at most
// min(strategies, hardware threads, max_threads) at a time; 0 means no
// extra cap) and waits for all of them. Per-strategy timeouts become failed
// outcomes and are excluded from selection; if every strategy fails the
// whole run throws (InstanceError if any strategy saw one, else
// AllStrategiesFailed).
PortfolioResult run_portfolio(const Plate& plate, std::span<const PrintObject> objects,
                              const ExtruderProfile& extruder, const PortfolioSetup& setup,
                              const EngineConfig& config, unsigned max_threads = 0);

} // namespace seqpack
