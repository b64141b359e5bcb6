#include "seqpack/portfolio.hpp"

#include "seqpack/errors.hpp"
#include "seqpack/rng.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace seqpack {

PortfolioKind portfolio_kind_from_string(const std::string& name) {
    if (name == "center") return PortfolioKind::Center;
    if (name == "ordering") return PortfolioKind::Ordering;
    if (name == "tactic") return PortfolioKind::Tactic;
    if (name == "combined") return PortfolioKind::Combined;
    throw ParseError("unknown portfolio '" + name + "' (expected center|ordering|tactic|combined)");
}

const char* portfolio_kind_name(PortfolioKind kind) {
    switch (kind) {
        case PortfolioKind::Center: return "center";
        case PortfolioKind::Ordering: return "ordering";
        case PortfolioKind::Tactic: return "tactic";
        case PortfolioKind::Combined: return "combined";
    }
    throw InternalError("unknown portfolio kind");
}

namespace {

constexpr Tactic kAllTactics[] = {Tactic::Center, Tactic::MinXMinY, Tactic::MaxXMinY, Tactic::MinXMaxY,
                                  Tactic::MaxXMaxY};
constexpr Ordering::Kind kAllOrderings[] = {Ordering::Kind::HeightMinToMax, Ordering::Kind::HeightMaxToMin,
                                            Ordering::Kind::HeightRandom, Ordering::Kind::HeightInput};

// Stable index in the full product, independent of which setup a strategy
// appears in.
std::uint64_t strategy_slot(std::size_t tactic_idx, std::size_t ordering_idx) {
    return tactic_idx * 4 + ordering_idx;
}

CompositeStrategy make_strategy(std::size_t tactic_idx, std::size_t ordering_idx, std::uint64_t global_seed) {
    CompositeStrategy s;
    s.tactic = kAllTactics[tactic_idx];
    s.ordering.kind = kAllOrderings[ordering_idx];
    s.ordering.seed = mix_seed(global_seed, strategy_slot(tactic_idx, ordering_idx));
    return s;
}

} // namespace

PortfolioSetup make_setup(PortfolioKind kind, std::uint64_t global_seed) {
    PortfolioSetup setup{kind, {}};
    switch (kind) {
        case PortfolioKind::Center:
            setup.strategies.push_back(make_strategy(0, 3, global_seed)); // Center/Height-Input
            break;
        case PortfolioKind::Ordering:
            for (std::size_t o = 0; o < 4; ++o) setup.strategies.push_back(make_strategy(0, o, global_seed));
            break;
        case PortfolioKind::Tactic:
            for (std::size_t t = 0; t < 5; ++t) setup.strategies.push_back(make_strategy(t, 3, global_seed));
            break;
        case PortfolioKind::Combined:
            for (std::size_t t = 0; t < 5; ++t)
                for (std::size_t o = 0; o < 4; ++o) setup.strategies.push_back(make_strategy(t, o, global_seed));
            break;
    }
    return setup;
}

const Schedule& select_best(std::span<const Schedule> answers) {
    if (answers.empty()) throw InternalError("select_best needs at least one answer");
    auto sigma_sum = [](const Schedule& s) {
        Rational sum = 0;
        for (const PlateAssignment& p : s.plates) sum += p.sigma;
        return sum;
    };
    const Schedule* best = &answers[0];
    Rational best_sigma = sigma_sum(*best);
    for (const Schedule& s : answers.subspan(1)) {
        Rational sigma = sigma_sum(s);
        if (s.plates.size() != best->plates.size()) {
            if (s.plates.size() < best->plates.size()) {
                best = &s;
                best_sigma = sigma;
            }
        } else if (sigma != best_sigma) {
            if (sigma < best_sigma) {
                best = &s;
                best_sigma = sigma;
            }
        } else if (s.strategy_name < best->strategy_name) {
            best = &s;
        }
    }
    return *best;
}

PortfolioResult run_portfolio(const Plate& plate, std::span<const PrintObject> objects,
                              const ExtruderProfile& extruder, const PortfolioSetup& setup,
                              const EngineConfig& config, unsigned max_threads) {
    if (setup.strategies.empty()) throw InternalError("portfolio setup has no strategies");

    std::vector<StrategyOutcome> outcomes(setup.strategies.size());

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (max_threads > 0) workers = std::min(workers, max_threads);
    workers = std::min<unsigned>(workers, static_cast<unsigned>(setup.strategies.size()));

    // Strategies beyond thread capacity queue behind the shared counter; no
    // early cancellation, everybody finishes.
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= setup.strategies.size()) return;
            const CompositeStrategy& strategy = setup.strategies[i];
            StrategyOutcome& out = outcomes[i];
            out.strategy_name = strategy.name();
            EngineConfig cfg = config;
            if (config.smt_dump_dir) {
                std::string sub = strategy.name();
                std::replace(sub.begin(), sub.end(), '/', '_');
                cfg.smt_dump_dir = *config.smt_dump_dir / sub;
            }
            try {
                out.schedule = solve_cegar_seq(plate, objects, extruder, strategy, cfg);
            } catch (const SolveTimeout& e) {
                out.failure = e.what();
                out.timed_out = true;
            } catch (const InstanceError& e) {
                out.failure = e.what();
                out.instance_error = true;
            } catch (const Error& e) {
                out.failure = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();

    std::vector<Schedule> answers;
    answers.reserve(outcomes.size());
    for (const StrategyOutcome& o : outcomes)
        if (o.schedule) answers.push_back(*o.schedule);
    if (answers.empty()) {
        for (const StrategyOutcome& o : outcomes)
            if (o.instance_error) throw InstanceError(o.strategy_name + ": " + o.failure);
        throw AllStrategiesFailed("all " + std::to_string(outcomes.size()) + " strategies failed; first: " +
                                  outcomes.front().failure);
    }

    PortfolioResult result{select_best(answers), std::move(outcomes)};
    return result;
}

} // namespace seqpack
