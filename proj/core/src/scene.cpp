#include "seqpack/scene.hpp"

#include "seqpack/errors.hpp"
#include "seqpack/rng.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace seqpack {

namespace {

using Json = nlohmann::ordered_json;

// SAX builder that replaces every number with its literal text, so decimal
// scene coordinates survive as exact strings instead of doubles.
struct ExactNumberBuilder {
    Json root;
    std::vector<Json*> stack;
    std::string pending_key;

    Json* place(Json value) {
        if (stack.empty()) {
            root = std::move(value);
            return &root;
        }
        Json* top = stack.back();
        if (top->is_array()) {
            top->push_back(std::move(value));
            return &top->back();
        }
        auto it = top->emplace(pending_key, std::move(value)).first;
        return &it.value();
    }

    bool null() { place(nullptr); return true; }
    bool boolean(bool v) { place(v); return true; }
    bool number_integer(std::int64_t v) { place(std::to_string(v)); return true; }
    bool number_unsigned(std::uint64_t v) { place(std::to_string(v)); return true; }
    bool number_float(double, const std::string& raw) { place(raw); return true; }
    bool string(std::string& v) { place(v); return true; }
    bool binary(Json::binary_t&) { return false; }
    bool start_object(std::size_t) { stack.push_back(place(Json::object())); return true; }
    bool key(std::string& k) { pending_key = k; return true; }
    bool end_object() { stack.pop_back(); return true; }
    bool start_array(std::size_t) { stack.push_back(place(Json::array())); return true; }
    bool end_array() { stack.pop_back(); return true; }
    bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& e) {
        throw SceneError("invalid JSON at byte " + std::to_string(pos) + ": " + e.what());
    }
};

Json parse_exact(std::string_view text) {
    ExactNumberBuilder builder;
    Json::sax_parse(text, &builder); // errors surface through parse_error
    return std::move(builder.root);
}

Rational field_rational(const Json& j, const std::string& path) {
    if (!j.is_string()) throw SceneError(path + ": expected a number");
    try {
        return rational_from_string(j.get<std::string>());
    } catch (const ParseError& e) {
        throw SceneError(path + ": " + e.what());
    }
}

const Json& require(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw SceneError(path + "." + key + ": missing");
    return j.at(key);
}

std::vector<Point2> field_points(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SceneError(path + ": expected a non-empty array of [x, y] pairs");
    std::vector<Point2> pts;
    pts.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& pair = j[i];
        std::string ppath = path + "[" + std::to_string(i) + "]";
        if (!pair.is_array() || pair.size() != 2) throw SceneError(ppath + ": expected [x, y]");
        pts.push_back({field_rational(pair[0], ppath + "[0]"), field_rational(pair[1], ppath + "[1]")});
    }
    return pts;
}

} // namespace

ExtruderProfile default_extruder() {
    std::vector<Point2> square{{-10, -10}, {10, -10}, {10, 10}, {-10, 10}};
    return ExtruderProfile(square);
}

Scene parse_scene_text(std::string_view text) {
    Json j = parse_exact(text);
    if (!j.is_object()) throw SceneError("scene: expected a JSON object");

    const Json& plate_j = require(j, "plate", "scene");
    Rational width = field_rational(require(plate_j, "width", "plate"), "plate.width");
    Rational height = field_rational(require(plate_j, "height", "plate"), "plate.height");
    if (width <= 0 || height <= 0) throw SceneError("plate: dimensions must be positive");

    ExtruderProfile extruder = default_extruder();
    if (j.contains("extruder")) {
        std::vector<Point2> pts =
            field_points(require(j.at("extruder"), "footprint", "extruder"), "extruder.footprint");
        try {
            extruder = ExtruderProfile(pts);
        } catch (const DegenerateInput& e) {
            throw SceneError(std::string("extruder.footprint: ") + e.what());
        }
    }

    const Json& objects_j = require(j, "objects", "scene");
    if (!objects_j.is_array() || objects_j.empty()) throw SceneError("objects: expected a non-empty array");

    std::vector<PrintObject> objects;
    objects.reserve(objects_j.size());
    std::set<std::string> ids;
    for (std::size_t i = 0; i < objects_j.size(); ++i) {
        const Json& o = objects_j[i];
        std::string path = "objects[" + std::to_string(i) + "]";
        const Json& id_j = require(o, "id", path);
        if (!id_j.is_string()) throw SceneError(path + ".id: expected a string");
        std::string id = id_j.get<std::string>();
        if (id.empty()) throw SceneError(path + ".id: must not be empty");
        if (!ids.insert(id).second) throw SceneError(path + ".id: duplicate id '" + id + "'");

        try {
            if (o.contains("cuboid")) {
                const Json& c = o.at("cuboid");
                Rational length = field_rational(require(c, "length", path + ".cuboid"), path + ".cuboid.length");
                Rational cwidth = field_rational(require(c, "width", path + ".cuboid"), path + ".cuboid.width");
                Rational cheight = field_rational(require(c, "height", path + ".cuboid"), path + ".cuboid.height");
                if (length <= 0 || cwidth <= 0) throw SceneError(path + ".cuboid: dimensions must be positive");
                std::vector<Point2> rect{{0, 0}, {length, 0}, {length, cwidth}, {0, cwidth}};
                objects.emplace_back(id, ConvexPolygon(std::move(rect)), cheight);
            } else {
                Rational oheight = field_rational(require(o, "height", path), path + ".height");
                std::vector<Point2> pts = field_points(require(o, "footprint", path), path + ".footprint");
                objects.emplace_back(id, convex_hull(pts), oheight);
            }
        } catch (const DegenerateInput& e) {
            throw SceneError(path + ": " + e.what());
        }
    }

    return Scene{Plate::make(width, height), std::move(extruder), std::move(objects)};
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SceneError("cannot open scene file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_text(buf.str());
}

std::string scene_to_json(const Scene& scene) {
    Json j = Json::object();
    j["plate"] = {{"width", exact_string(scene.plate.width)}, {"height", exact_string(scene.plate.height)}};
    Json epts = Json::array();
    for (const Point2& p : scene.extruder.hull_points())
        epts.push_back(Json::array({exact_string(p.x), exact_string(p.y)}));
    j["extruder"] = {{"footprint", std::move(epts)}};
    Json objs = Json::array();
    for (const PrintObject& o : scene.objects) {
        Json fp = Json::array();
        for (const Point2& p : o.footprint.vertices())
            fp.push_back(Json::array({exact_string(p.x), exact_string(p.y)}));
        Json obj = Json::object();
        obj["id"] = o.id;
        obj["height"] = exact_string(o.height);
        obj["footprint"] = std::move(fp);
        objs.push_back(std::move(obj));
    }
    j["objects"] = std::move(objs);
    return j.dump(2) + "\n";
}

void write_scene(const std::filesystem::path& path, const Scene& scene) {
    std::ofstream out(path);
    if (!out) throw SceneError("cannot write scene file " + path.string());
    out << scene_to_json(scene);
}

std::vector<PrintObject> gen_random_cuboids(int n, int dim_min, int dim_max, std::uint64_t seed) {
    if (n < 0 || dim_min < 1 || dim_max < dim_min)
        throw SceneError("invalid cuboid generator bounds");
    SplitMix64 rng(seed);
    std::vector<PrintObject> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto lo = static_cast<std::uint64_t>(dim_min), hi = static_cast<std::uint64_t>(dim_max);
        long length = static_cast<long>(rng.uniform(lo, hi));
        long width = static_cast<long>(rng.uniform(lo, hi));
        long height = static_cast<long>(rng.uniform(lo, hi));
        std::vector<Point2> rect{{0, 0}, {length, 0}, {length, width}, {0, width}};
        out.emplace_back("c" + std::to_string(i), ConvexPolygon(std::move(rect)), Rational(height));
    }
    return out;
}

namespace {

struct PoolShape {
    const char* tag;
    std::vector<Point2> footprint;
    long height;
};

const std::vector<PoolShape>& part_pool() {
    static const std::vector<PoolShape> pool = [] {
        std::vector<PoolShape> p;
        p.push_back({"bracket", {{0, 0}, {42, 0}, {42, 20}, {0, 20}}, 12});
        p.push_back({"rail", {{0, 0}, {120, 0}, {120, 12}, {0, 12}}, 8});
        p.push_back({"post", {{0, 0}, {15, 0}, {15, 15}, {0, 15}}, 60});
        p.push_back({"gear", {{10, 0}, {25, 0}, {35, 10}, {35, 25}, {25, 35}, {10, 35}, {0, 25}, {0, 10}}, 10});
        p.push_back({"wedge", {{0, 0}, {38, 0}, {0, 30}}, 16});
        p.push_back({"cover", {{0, 0}, {80, 0}, {80, 50}, {0, 50}}, 6});
        p.push_back({"knob", {{0, 0}, {18, 0}, {18, 18}, {0, 18}}, 25});
        p.push_back({"corner", {{0, 0}, {48, 0}, {48, 14}, {22, 34}, {0, 34}}, 22});
        p.push_back({"pulley", {{6, 0}, {16, 0}, {22, 6}, {22, 16}, {16, 22}, {6, 22}, {0, 16}, {0, 6}}, 18});
        p.push_back({"fan", {{0, 12}, {12, 0}, {40, 0}, {52, 12}, {52, 40}, {40, 52}, {12, 52}, {0, 40}}, 14});
        return p;
    }();
    return pool;
}

} // namespace

std::vector<PrintObject> gen_object_pool(int n, std::uint64_t seed) {
    if (n < 0) throw SceneError("invalid object count");
    const auto& pool = part_pool();
    SplitMix64 rng(seed);
    std::vector<PrintObject> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const PoolShape& shape = pool[static_cast<std::size_t>(rng.uniform(0, pool.size() - 1))];
        out.emplace_back("p" + std::to_string(i) + "-" + shape.tag, ConvexPolygon(shape.footprint),
                         Rational(shape.height));
    }
    return out;
}

} // namespace seqpack
