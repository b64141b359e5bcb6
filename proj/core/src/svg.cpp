#include "seqpack/svg.hpp"

#include "seqpack/errors.hpp"

#include <ctime>
#include <map>
#include <sstream>

namespace seqpack {

namespace {

struct Frame {
    Rational plate_height;

    std::string pt(const Point2& world) const {
        return decimal_string(world.x) + "," + decimal_string(plate_height - world.y);
    }

    void rect(std::ostream& os, const char* cls, const ConvexPolygon& axis_aligned_rect,
              const char* extra) const {
        Rational x0 = axis_aligned_rect.vertex(0).x, x1 = x0;
        Rational y0 = axis_aligned_rect.vertex(0).y, y1 = y0;
        for (const Point2& v : axis_aligned_rect.vertices()) {
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y);
            y1 = std::max(y1, v.y);
        }
        os << "  <rect class=\"" << cls << "\" x=\"" << decimal_string(x0) << "\" y=\""
           << decimal_string(plate_height - y1) << "\" width=\"" << decimal_string(x1 - x0)
           << "\" height=\"" << decimal_string(y1 - y0) << "\" " << extra << "/>\n";
    }

    void polygon(std::ostream& os, const char* cls, const ConvexPolygon& poly, const Point2& at,
                 const char* extra) const {
        os << "  <polygon class=\"" << cls << "\" points=\"";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (i) os << " ";
            os << pt(poly.vertex(i) + at);
        }
        os << "\" " << extra << "/>\n";
    }
};

} // namespace

std::vector<std::string> render_svg(const Schedule& schedule, const Scene& scene, const SvgOptions& options) {
    std::map<std::string, const PrintObject*> by_id;
    for (const PrintObject& o : scene.objects) by_id.emplace(o.id, &o);

    std::string stamp;
    if (options.timestamp) {
        std::time_t now = std::time(nullptr);
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        stamp = buf;
    }

    Frame frame{scene.plate.height};
    std::vector<std::string> documents;
    for (const PlateAssignment& plate : schedule.plates) {
        std::ostringstream os;
        std::string w = decimal_string(scene.plate.width), h = decimal_string(scene.plate.height);
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        if (options.timestamp) os << "<!-- generated " << stamp << " -->\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "mm\" height=\"" << h
           << "mm\" viewBox=\"0 0 " << w << " " << h << "\">\n";

        frame.rect(os, "plate", scene.plate.polygon, "fill=\"none\" stroke=\"#444444\" stroke-width=\"0.6\"");
        ConvexPolygon sigma_plate = scale_plate(scene.plate, plate.sigma, plate.anchor);
        frame.rect(os, "sigma-plate", sigma_plate,
                   "fill=\"none\" stroke=\"#cc3333\" stroke-width=\"0.4\" stroke-dasharray=\"2 1\"");

        std::vector<PlacementEntry> entries = plate.ordered_entries();
        for (const PlacementEntry& e : entries) {
            auto it = by_id.find(e.object_id);
            if (it == by_id.end()) throw ScheduleError("schedule names unknown object '" + e.object_id + "'");
            ConvexPolygon env = envelope_hull(*it->second, scene.extruder);
            frame.polygon(os, "envelope", env, {e.x, e.y},
                          "fill=\"none\" stroke=\"#88aacc\" stroke-width=\"0.3\"");
        }
        for (const PlacementEntry& e : entries) {
            const PrintObject& obj = *by_id.at(e.object_id);
            frame.polygon(os, "object", obj.footprint, {e.x, e.y},
                          "fill=\"#7aa7d6\" fill-opacity=\"0.85\" stroke=\"#223355\" stroke-width=\"0.3\"");
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const PlacementEntry& e = entries[i];
            Point2 c = by_id.at(e.object_id)->footprint.vertex_centroid() + Point2{e.x, e.y};
            os << "  <text x=\"" << decimal_string(c.x) << "\" y=\""
               << decimal_string(scene.plate.height - c.y)
               << "\" font-size=\"6\" font-family=\"sans-serif\" text-anchor=\"middle\" "
                  "dominant-baseline=\"middle\" fill=\"#111111\">"
               << (i + 1) << "</text>\n";
        }
        os << "</svg>\n";
        documents.push_back(os.str());
    }
    return documents;
}

} // namespace seqpack
