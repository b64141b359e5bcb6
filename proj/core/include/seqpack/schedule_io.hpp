#pragma once

#include "seqpack/cegar.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace seqpack {

// JSON schedule files. Decimal fields are written as strings with 12
// significant digits next to exact "p/q" twins; loading prefers the exact
// twin so write-then-load verifies identically. Print order per plate is
// 1..n ascending print time. wall_time_ms is written as 0 unless
// emit_timings is set, keeping equal-seed runs byte-identical.
std::string schedule_to_json(const Schedule& schedule, bool emit_timings = false);
void write_schedule(const std::filesystem::path& path, const Schedule& schedule, bool emit_timings = false);

Schedule parse_schedule_text(std::string_view text);
Schedule load_schedule(const std::filesystem::path& path);

} // namespace seqpack
