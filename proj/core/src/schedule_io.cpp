#include "seqpack/schedule_io.hpp"

#include "seqpack/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace seqpack {

namespace {

using Json = nlohmann::ordered_json;

void put_rational(Json& obj, const char* key, const Rational& r) {
    obj[key] = decimal_string(r);
    obj[std::string(key) + "_exact"] = exact_string(r);
}

Rational get_rational(const Json& obj, const std::string& key, const std::string& path) {
    std::string exact_key = key + "_exact";
    const Json* field = nullptr;
    if (obj.contains(exact_key))
        field = &obj.at(exact_key);
    else if (obj.contains(key))
        field = &obj.at(key);
    else
        throw ScheduleError(path + "." + key + ": missing");
    if (!field->is_string() && !field->is_number())
        throw ScheduleError(path + "." + key + ": expected a number");
    try {
        if (field->is_string()) return rational_from_string(field->get<std::string>());
        // Integers survive a double round-trip only in a limited range;
        // schedule files we write always carry string fields, this is a
        // convenience for hand-written ones.
        std::ostringstream os;
        os << *field;
        return rational_from_string(os.str());
    } catch (const ParseError& e) {
        throw ScheduleError(path + "." + key + ": " + e.what());
    }
}

} // namespace

std::string schedule_to_json(const Schedule& schedule, bool emit_timings) {
    Json j = Json::object();
    j["strategy"] = schedule.strategy_name;
    Json plates = Json::array();
    std::vector<std::size_t> per_plate_counts;
    for (const PlateAssignment& p : schedule.plates) {
        Json pj = Json::object();
        pj["plate_index"] = p.plate_index;
        put_rational(pj, "sigma", p.sigma);
        pj["anchor"] = Json::array({decimal_string(p.anchor.x), decimal_string(p.anchor.y)});
        pj["anchor_exact"] = Json::array({exact_string(p.anchor.x), exact_string(p.anchor.y)});
        Json placements = Json::array();
        std::vector<PlacementEntry> entries = p.ordered_entries();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const PlacementEntry& e = entries[i];
            Json ej = Json::object();
            ej["id"] = e.object_id;
            put_rational(ej, "x", e.x);
            put_rational(ej, "y", e.y);
            ej["order"] = i + 1;
            placements.push_back(std::move(ej));
        }
        per_plate_counts.push_back(entries.size());
        pj["placements"] = std::move(placements);
        plates.push_back(std::move(pj));
    }
    j["plates"] = std::move(plates);
    Json stats = Json::object();
    stats["plates_used"] = schedule.plates.size();
    stats["objects_per_plate"] = per_plate_counts;
    stats["wall_time_ms"] = emit_timings ? schedule.wall_time.count() : 0;
    j["stats"] = std::move(stats);
    return j.dump(2) + "\n";
}

void write_schedule(const std::filesystem::path& path, const Schedule& schedule, bool emit_timings) {
    std::ofstream out(path);
    if (!out) throw ScheduleError("cannot write schedule file " + path.string());
    out << schedule_to_json(schedule, emit_timings);
}

Schedule parse_schedule_text(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::detail::exception& e) {
        throw ScheduleError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScheduleError("schedule: expected a JSON object");

    Schedule out;
    if (j.contains("strategy") && j.at("strategy").is_string())
        out.strategy_name = j.at("strategy").get<std::string>();
    if (!j.contains("plates") || !j.at("plates").is_array())
        throw ScheduleError("plates: missing or not an array");

    for (std::size_t pi = 0; pi < j.at("plates").size(); ++pi) {
        const Json& pj = j.at("plates")[pi];
        std::string path = "plates[" + std::to_string(pi) + "]";
        PlateAssignment plate;
        plate.plate_index = static_cast<int>(pi);
        if (pj.contains("plate_index") && pj.at("plate_index").is_number_integer())
            plate.plate_index = pj.at("plate_index").get<int>();
        plate.sigma = get_rational(pj, "sigma", path);
        if (plate.sigma <= 0 || plate.sigma > 1)
            throw ScheduleError(path + ".sigma: must be in (0, 1]");

        const Json* anchor = nullptr;
        if (pj.contains("anchor_exact"))
            anchor = &pj.at("anchor_exact");
        else if (pj.contains("anchor"))
            anchor = &pj.at("anchor");
        if (!anchor || !anchor->is_array() || anchor->size() != 2)
            throw ScheduleError(path + ".anchor: expected [x, y]");
        auto anchor_coord = [&](std::size_t k) {
            const Json& c = (*anchor)[k];
            if (c.is_string()) return rational_from_string(c.get<std::string>());
            std::ostringstream os;
            os << c;
            return rational_from_string(os.str());
        };
        plate.anchor = {anchor_coord(0), anchor_coord(1)};

        if (!pj.contains("placements") || !pj.at("placements").is_array() || pj.at("placements").empty())
            throw ScheduleError(path + ".placements: missing or empty");

        struct Loaded {
            long order;
            PlacementEntry entry;
        };
        std::vector<Loaded> loaded;
        for (std::size_t i = 0; i < pj.at("placements").size(); ++i) {
            const Json& ej = pj.at("placements")[i];
            std::string epath = path + ".placements[" + std::to_string(i) + "]";
            if (!ej.contains("id") || !ej.at("id").is_string())
                throw ScheduleError(epath + ".id: missing");
            if (!ej.contains("order") || !ej.at("order").is_number_integer())
                throw ScheduleError(epath + ".order: missing integer");
            Loaded l;
            l.order = ej.at("order").get<long>();
            l.entry.object_id = ej.at("id").get<std::string>();
            l.entry.x = get_rational(ej, "x", epath);
            l.entry.y = get_rational(ej, "y", epath);
            loaded.push_back(std::move(l));
        }
        std::sort(loaded.begin(), loaded.end(), [](const Loaded& a, const Loaded& b) { return a.order < b.order; });
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            if (loaded[i].order != static_cast<long>(i) + 1)
                throw ScheduleError(path + ".placements: order values must be 1.." +
                                    std::to_string(loaded.size()) + " consecutive");
        }

        // Print times are not serialized; regenerate order stamps spaced
        // wider than the default separation.
        PlacementGroup group;
        for (std::size_t i = 0; i < loaded.size(); ++i) {
            loaded[i].entry.t = Rational(2 * (static_cast<long>(i) + 1));
            group.entries.push_back(std::move(loaded[i].entry));
        }
        group.sigma = plate.sigma;
        plate.groups.push_back(std::move(group));
        out.plates.push_back(std::move(plate));
    }
    return out;
}

Schedule load_schedule(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScheduleError("cannot open schedule file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schedule_text(buf.str());
}

} // namespace seqpack
