#pragma once

#include "seqpack/portfolio.hpp"
#include "seqpack/scene.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seqpack {

struct BenchmarkSpec {
    enum class Kind { RandomCuboids, ObjectPool };

    Kind kind = Kind::RandomCuboids;
    int count_min = 1;
    int count_max = 32;
    int instances = 100; // per object count
    std::uint64_t seed = 0;
    int dim_min = 8; // cuboid dimension bounds, integer mm
    int dim_max = 64;
    Rational plate_width = 200;
    Rational plate_height = 200;

    void validate() const;
};

// Per (object count, instance, setup) outcome.
struct BenchRecord {
    int count = 0;
    int instance = 0;
    std::uint64_t instance_seed = 0;
    PortfolioKind setup;
    bool solved = false;
    std::string failure;
    int plates = 0;
    std::vector<std::size_t> objects_per_plate;
    long wall_ms = 0;
};

// Aggregate per (setup, object count).
struct BenchAggregate {
    PortfolioKind setup;
    int count = 0;
    int solved = 0;
    int failed = 0;
    double mean_plates = 0;
    double mean_wall_ms = 0;
    // histogram[j] = number of plates carrying exactly j objects, j >= 1
    std::vector<long> objects_per_plate_histogram;
};

struct BenchReport {
    BenchmarkSpec spec;
    int group_size = 4;
    std::vector<PortfolioKind> setups;
    std::vector<BenchRecord> records;
    std::vector<BenchAggregate> aggregates;
};

// The seed used for instance (count n, index i) of a run: every setup sees
// the same objects and the same per-strategy randomness for an instance.
std::uint64_t bench_instance_seed(std::uint64_t global_seed, int count, int instance);

BenchReport run_benchmark(const BenchmarkSpec& spec, std::span<const PortfolioKind> setups,
                          const EngineConfig& config, unsigned max_threads = 0);

std::string bench_report_json(const BenchReport& report);
std::string bench_report_table(const BenchReport& report);

} // namespace seqpack
