#pragma once

#include "seqpack/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace seqpack {

struct Scene {
    Plate plate;
    ExtruderProfile extruder;
    std::vector<PrintObject> objects;
};

// JSON scene files. Numeric fields accept numbers or strings; either way
// the decimal text is converted to an exact rational ("0.1" loads as 1/10,
// never as a binary float), and "p/q" strings are taken verbatim.
// Cuboid entries expand to [0,length]x[0,width] rectangles of the given
// height. When the extruder is omitted the default profile is a 20 mm
// square centered on the nozzle; that value is a placeholder for real
// printer geometry, not a calibrated one.
Scene load_scene(const std::filesystem::path& path);
Scene parse_scene_text(std::string_view text);

// Inverse of load_scene, with exact "p/q" coordinate strings.
std::string scene_to_json(const Scene& scene);
void write_scene(const std::filesystem::path& path, const Scene& scene);

ExtruderProfile default_extruder();

// n cuboids with integer length/width/height drawn uniformly (closed
// interval), seeded and reproducible across platforms; ids "c0".."c<n-1>".
std::vector<PrintObject> gen_random_cuboids(int n, int dim_min, int dim_max, std::uint64_t seed);

// n objects drawn with repetition from a small built-in pool of printer-
// part-like shapes (mixed convex footprints and heights); ids "p0"...
std::vector<PrintObject> gen_object_pool(int n, std::uint64_t seed);

} // namespace seqpack
