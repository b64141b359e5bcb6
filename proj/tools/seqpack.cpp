#include "seqpack/bench.hpp"
#include "seqpack/errors.hpp"
#include "seqpack/portfolio.hpp"
#include "seqpack/scene.hpp"
#include "seqpack/schedule_io.hpp"
#include "seqpack/smtlib.hpp"
#include "seqpack/svg.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace seqpack;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInputError = 4;
constexpr int kExitInternal = 5;

struct EngineFlags {
    std::string eps_xy = "1/1024";
    std::string eps_t = "1";
    int group_size = 4;
    long timeout_s = 60;
    std::string backend = "internal";
    std::string smtlib_dump;
    unsigned threads = 0;

    void attach(CLI::App& app) {
        app.add_option("--group-size", group_size, "Objects scheduled at once (k)")->capture_default_str();
        app.add_option("--eps-xy", eps_xy, "Bisection tolerance on sigma (rational or decimal)")
            ->capture_default_str();
        app.add_option("--eps-t", eps_t, "Print-time separation (rational or decimal)")->capture_default_str();
        app.add_option("--timeout-s", timeout_s, "Deadline per bounded solve, seconds")->capture_default_str();
        app.add_option("--backend", backend, "internal or external:<command reading SMT-LIB2 on stdin>")
            ->capture_default_str();
        app.add_option("--smtlib-dump", smtlib_dump, "Directory for per-call SMT-LIB2 dumps");
        app.add_option("--threads", threads, "Cap on concurrent strategy runs (0 = hardware)");
    }

    EngineConfig to_config() const {
        EngineConfig cfg;
        cfg.eps_xy = rational_from_string(eps_xy);
        cfg.eps_t = rational_from_string(eps_t);
        cfg.group_size = group_size;
        cfg.bounded_deadline = std::chrono::milliseconds(timeout_s * 1000);
        cfg.backend = backend_from_string(backend);
        if (!smtlib_dump.empty()) cfg.smt_dump_dir = std::filesystem::path(smtlib_dump);
        return cfg;
    }
};

std::pair<int, int> parse_range(const std::string& text, const char* what) {
    auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": expected N or LO..HI, got '" + text + "'");
    }
}

std::pair<Rational, Rational> parse_plate(const std::string& text) {
    auto x = text.find('x');
    if (x == std::string::npos) throw ParseError("--plate: expected WxH, got '" + text + "'");
    return {rational_from_string(text.substr(0, x)), rational_from_string(text.substr(x + 1))};
}

int run_solve(const std::string& scene_path, const std::string& portfolio, const EngineFlags& flags,
              std::uint64_t seed, const std::string& out_path, const std::string& svg_dir, bool skip_verify,
              bool emit_timings, bool svg_no_timestamp) {
    Scene scene = load_scene(scene_path);
    EngineConfig cfg = flags.to_config();
    PortfolioSetup setup = make_setup(portfolio_kind_from_string(portfolio), seed);

    PortfolioResult result = run_portfolio(scene.plate, scene.objects, scene.extruder, setup, cfg, flags.threads);

    for (const StrategyOutcome& o : result.outcomes) {
        if (o.schedule)
            std::cerr << "strategy " << o.strategy_name << ": " << o.schedule->plates.size() << " plate(s), "
                      << o.schedule->wall_time.count() << " ms\n";
        else
            std::cerr << "strategy " << o.strategy_name << ": failed (" << o.failure << ")\n";
    }
    std::cerr << "selected " << result.best.strategy_name << " with " << result.best.plates.size()
              << " plate(s)\n";

    if (!skip_verify) {
        std::vector<Violation> violations =
            verify_schedule(result.best, scene.objects, scene.extruder, scene.plate);
        if (!violations.empty()) {
            for (const Violation& v : violations)
                std::cerr << "violation: " << violation_kind_name(v.kind) << " on plate " << v.plate_index
                          << ": " << v.object_a << (v.object_b.empty() ? "" : " vs " + v.object_b) << ": "
                          << v.detail << "\n";
            std::cerr << "refusing to write an unverified schedule\n";
            return kExitInternal;
        }
    }

    std::string json = schedule_to_json(result.best, emit_timings);
    if (out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ScheduleError("cannot write schedule file " + out_path);
        out << json;
    }

    if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        SvgOptions options;
        options.timestamp = !svg_no_timestamp;
        std::vector<std::string> docs = render_svg(result.best, scene, options);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            std::filesystem::path file = std::filesystem::path(svg_dir) / ("plate_" + std::to_string(i) + ".svg");
            std::ofstream out(file);
            if (!out) throw ScheduleError("cannot write " + file.string());
            out << docs[i];
        }
    }
    return kExitOk;
}

int run_verify(const std::string& scene_path, const std::string& schedule_path) {
    Scene scene = load_scene(scene_path);
    Schedule schedule = load_schedule(schedule_path);
    std::vector<Violation> violations;
    try {
        violations = verify_schedule(schedule, scene.objects, scene.extruder, scene.plate);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (violations.empty()) {
        std::cout << "schedule verifies cleanly: " << schedule.object_count() << " object(s) on "
                  << schedule.plates.size() << " plate(s)\n";
        return kExitOk;
    }
    for (const Violation& v : violations)
        std::cout << "violation: " << violation_kind_name(v.kind) << " on plate " << v.plate_index << ": "
                  << v.object_a << (v.object_b.empty() ? "" : " vs " + v.object_b) << ": " << v.detail
                  << "\n";
    std::cout << violations.size() << " violation(s)\n";
    return kExitViolations;
}

int run_bench(const BenchmarkSpec& spec, const std::string& setups_csv, const EngineFlags& flags,
              const std::string& out_path) {
    std::vector<PortfolioKind> setups;
    std::stringstream ss(setups_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) setups.push_back(portfolio_kind_from_string(item));
    }
    BenchReport report = run_benchmark(spec, setups, flags.to_config(), flags.threads);
    std::cout << bench_report_table(report);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw SceneError("cannot write report file " + out_path);
        out << bench_report_json(report);
    }
    return kExitOk;
}

// Reference QF_LRA checker for the emitter's own grammar; lets the external
// backend bridge run end to end without a third-party solver:
//   seqpack solve --backend "external:seqpack smt-check"
int run_smt_check(long timeout_s) {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    Formula f = parse_smtlib(buf.str());
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (timeout_s > 0)
        deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_s);
    SolveResult result = internal_decide(f, deadline);
    switch (result.status) {
        case SolveStatus::Sat: {
            Assignment model = *result.model;
            for (const VarId& v : f.variables()) model.try_emplace(v, 0);
            std::cout << "sat\n" << model_to_smtlib(model);
            return kExitOk;
        }
        case SolveStatus::Unsat:
            std::cout << "unsat\n";
            return kExitOk;
        case SolveStatus::Timeout:
            std::cout << "unknown\n";
            return kExitOk;
    }
    return kExitInternal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential 3D-print packing and scheduling"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Arrange and schedule a scene across printing plates");
    std::string scene_path, portfolio = "center", out_path, svg_dir;
    std::uint64_t seed = 0;
    bool skip_verify = false, emit_timings = false, svg_no_timestamp = false;
    EngineFlags solve_flags;
    solve->add_option("--scene", scene_path, "Scene JSON file")->required();
    solve->add_option("--portfolio", portfolio, "center|ordering|tactic|combined")->capture_default_str();
    solve->add_option("--seed", seed, "Global random seed")->capture_default_str();
    solve->add_option("--out", out_path, "Schedule JSON output path (default: stdout)");
    solve->add_option("--svg-dir", svg_dir, "Directory for per-plate SVG renderings");
    solve->add_flag("--skip-verify", skip_verify, "Skip the verifier before writing (debugging only)");
    solve->add_flag("--emit-timings", emit_timings, "Write measured wall time into the schedule file");
    solve->add_flag("--svg-no-timestamp", svg_no_timestamp, "Omit the generation-time comment in SVGs");
    solve_flags.attach(*solve);

    // verify
    auto* verify = app.add_subcommand("verify", "Check a schedule against a scene");
    std::string v_scene, v_schedule;
    verify->add_option("--scene", v_scene, "Scene JSON file")->required();
    verify->add_option("--schedule", v_schedule, "Schedule JSON file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run the seeded benchmark harness");
    std::string kind = "random-cuboids", plate = "200x200", dims = "8..64", counts = "1..32";
    std::string setups = "center,ordering,tactic,combined", bench_out;
    int instances = 100;
    std::uint64_t bench_seed = 0;
    EngineFlags bench_flags;
    bench->add_option("--kind", kind, "random-cuboids|object-pool")->capture_default_str();
    bench->add_option("--plate", plate, "Plate size WxH in mm")->capture_default_str();
    bench->add_option("--dims", dims, "Cuboid dimension bounds LO..HI, integer mm")->capture_default_str();
    bench->add_option("--counts", counts, "Object count sweep N or LO..HI")->capture_default_str();
    bench->add_option("--instances", instances, "Instances per object count")->capture_default_str();
    bench->add_option("--seed", bench_seed, "Global random seed")->capture_default_str();
    bench->add_option("--setups", setups, "Comma-separated portfolio setups")->capture_default_str();
    bench->add_option("--out", bench_out, "Machine-readable JSON report path");
    bench_flags.attach(*bench);

    // smt-check
    auto* smt = app.add_subcommand("smt-check", "Decide a QF_LRA problem read from stdin (emitter grammar)");
    long smt_timeout = 0;
    smt->add_option("--timeout-s", smt_timeout, "Deadline in seconds (0 = none)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return run_solve(scene_path, portfolio, solve_flags, seed, out_path, svg_dir, skip_verify,
                             emit_timings, svg_no_timestamp);
        if (verify->parsed()) return run_verify(v_scene, v_schedule);
        if (bench->parsed()) {
            BenchmarkSpec spec;
            spec.kind = [&] {
                if (kind == "random-cuboids") return BenchmarkSpec::Kind::RandomCuboids;
                if (kind == "object-pool") return BenchmarkSpec::Kind::ObjectPool;
                throw ParseError("--kind must be random-cuboids or object-pool, got '" + kind + "'");
            }();
            std::tie(spec.plate_width, spec.plate_height) = parse_plate(plate);
            std::tie(spec.dim_min, spec.dim_max) = parse_range(dims, "--dims");
            std::tie(spec.count_min, spec.count_max) = parse_range(counts, "--counts");
            spec.instances = instances;
            spec.seed = bench_seed;
            return run_bench(spec, setups, bench_flags, bench_out);
        }
        if (smt->parsed()) return run_smt_check(smt_timeout);
    } catch (const InstanceError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const SolveTimeout& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const AllStrategiesFailed& e) {
        std::cerr << "no strategy finished: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const SceneError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ScheduleError& e) {
        std::cerr << "schedule error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DegenerateInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
