#include "seqpack/bench.hpp"

#include "seqpack/errors.hpp"
#include "seqpack/rng.hpp"

#include <nlohmann/json.hpp>

#include <iomanip>
#include <sstream>

namespace seqpack {

void BenchmarkSpec::validate() const {
    if (count_min < 1 || count_max < count_min) throw SceneError("invalid benchmark count range");
    if (instances < 1) throw SceneError("benchmark needs at least one instance per count");
    if (dim_min < 1 || dim_max < dim_min) throw SceneError("invalid benchmark dimension range");
    if (plate_width <= 0 || plate_height <= 0) throw SceneError("invalid benchmark plate");
}

std::uint64_t bench_instance_seed(std::uint64_t global_seed, int count, int instance) {
    return mix_seed(mix_seed(global_seed, static_cast<std::uint64_t>(count)),
                    static_cast<std::uint64_t>(instance));
}

BenchReport run_benchmark(const BenchmarkSpec& spec, std::span<const PortfolioKind> setups,
                          const EngineConfig& config, unsigned max_threads) {
    spec.validate();
    config.validate();
    if (setups.empty()) throw SceneError("benchmark needs at least one portfolio setup");

    BenchReport report;
    report.spec = spec;
    report.group_size = config.group_size;
    report.setups.assign(setups.begin(), setups.end());

    Plate plate = Plate::make(spec.plate_width, spec.plate_height);
    ExtruderProfile extruder = default_extruder();

    for (int n = spec.count_min; n <= spec.count_max; ++n) {
        for (int inst = 0; inst < spec.instances; ++inst) {
            std::uint64_t iseed = bench_instance_seed(spec.seed, n, inst);
            std::vector<PrintObject> objects = spec.kind == BenchmarkSpec::Kind::RandomCuboids
                                                   ? gen_random_cuboids(n, spec.dim_min, spec.dim_max, iseed)
                                                   : gen_object_pool(n, iseed);
            for (PortfolioKind kind : setups) {
                BenchRecord rec;
                rec.count = n;
                rec.instance = inst;
                rec.instance_seed = iseed;
                rec.setup = kind;
                auto started = std::chrono::steady_clock::now();
                try {
                    PortfolioSetup setup = make_setup(kind, iseed);
                    PortfolioResult result = run_portfolio(plate, objects, extruder, setup, config, max_threads);
                    rec.solved = true;
                    rec.plates = static_cast<int>(result.best.plates.size());
                    for (const PlateAssignment& p : result.best.plates) {
                        std::size_t count = 0;
                        for (const PlacementGroup& g : p.groups) count += g.entries.size();
                        rec.objects_per_plate.push_back(count);
                    }
                } catch (const Error& e) {
                    rec.failure = e.what();
                }
                rec.wall_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                    std::chrono::steady_clock::now() - started)
                                                    .count());
                report.records.push_back(std::move(rec));
            }
        }
    }

    for (PortfolioKind kind : setups) {
        for (int n = spec.count_min; n <= spec.count_max; ++n) {
            BenchAggregate agg;
            agg.setup = kind;
            agg.count = n;
            long plates_sum = 0;
            long wall_sum = 0;
            for (const BenchRecord& rec : report.records) {
                if (rec.setup != kind || rec.count != n) continue;
                if (!rec.solved) {
                    agg.failed += 1;
                    continue;
                }
                agg.solved += 1;
                plates_sum += rec.plates;
                wall_sum += rec.wall_ms;
                for (std::size_t objects : rec.objects_per_plate) {
                    if (agg.objects_per_plate_histogram.size() < objects)
                        agg.objects_per_plate_histogram.resize(objects, 0);
                    agg.objects_per_plate_histogram[objects - 1] += 1;
                }
            }
            if (agg.solved > 0) {
                agg.mean_plates = static_cast<double>(plates_sum) / agg.solved;
                agg.mean_wall_ms = static_cast<double>(wall_sum) / agg.solved;
            }
            report.aggregates.push_back(std::move(agg));
        }
    }
    return report;
}

std::string bench_report_json(const BenchReport& report) {
    using Json = nlohmann::ordered_json;
    Json j = Json::object();
    j["kind"] = report.spec.kind == BenchmarkSpec::Kind::RandomCuboids ? "random-cuboids" : "object-pool";
    j["plate"] = {{"width", decimal_string(report.spec.plate_width)},
                  {"height", decimal_string(report.spec.plate_height)}};
    j["dims"] = {{"min", report.spec.dim_min}, {"max", report.spec.dim_max}};
    j["counts"] = {{"min", report.spec.count_min}, {"max", report.spec.count_max}};
    j["instances_per_count"] = report.spec.instances;
    j["seed"] = report.spec.seed;
    j["group_size"] = report.group_size;

    Json aggs = Json::array();
    for (const BenchAggregate& a : report.aggregates) {
        Json aj = Json::object();
        aj["setup"] = portfolio_kind_name(a.setup);
        aj["objects"] = a.count;
        aj["solved"] = a.solved;
        aj["failed"] = a.failed;
        aj["mean_plates"] = a.mean_plates;
        aj["mean_wall_ms"] = a.mean_wall_ms;
        aj["objects_per_plate_histogram"] = a.objects_per_plate_histogram;
        aggs.push_back(std::move(aj));
    }
    j["aggregates"] = std::move(aggs);

    Json recs = Json::array();
    for (const BenchRecord& r : report.records) {
        Json rj = Json::object();
        rj["objects"] = r.count;
        rj["instance"] = r.instance;
        rj["instance_seed"] = r.instance_seed;
        rj["setup"] = portfolio_kind_name(r.setup);
        rj["solved"] = r.solved;
        if (r.solved) {
            rj["plates"] = r.plates;
            rj["objects_per_plate"] = r.objects_per_plate;
        } else {
            rj["failure"] = r.failure;
        }
        rj["wall_ms"] = r.wall_ms;
        recs.push_back(std::move(rj));
    }
    j["records"] = std::move(recs);
    return j.dump(2) + "\n";
}

std::string bench_report_table(const BenchReport& report) {
    std::ostringstream os;
    os << "setup      objects  solved  failed  mean_plates  mean_wall_ms  objects-per-plate histogram\n";
    for (const BenchAggregate& a : report.aggregates) {
        os << std::left << std::setw(11) << portfolio_kind_name(a.setup) << std::right << std::setw(7)
           << a.count << std::setw(8) << a.solved << std::setw(8) << a.failed << std::setw(13) << std::fixed
           << std::setprecision(2) << a.mean_plates << std::setw(14) << std::setprecision(1) << a.mean_wall_ms
           << "  ";
        for (std::size_t i = 0; i < a.objects_per_plate_histogram.size(); ++i) {
            if (i) os << " ";
            os << (i + 1) << ":" << a.objects_per_plate_histogram[i];
        }
        os << "\n";
    }
    return os.str();
}

} // namespace seqpack
