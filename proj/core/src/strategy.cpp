#include "seqpack/strategy.hpp"

#include "seqpack/errors.hpp"
#include "seqpack/rng.hpp"

#include <algorithm>
#include <numeric>

namespace seqpack {

const char* tactic_name(Tactic t) {
    switch (t) {
        case Tactic::Center: return "Center";
        case Tactic::MinXMinY: return "Min-X-Min-Y";
        case Tactic::MaxXMinY: return "Max-X-Min-Y";
        case Tactic::MinXMaxY: return "Min-X-Max-Y";
        case Tactic::MaxXMaxY: return "Max-X-Max-Y";
    }
    throw InternalError("unknown tactic");
}

Point2 tactic_anchor(Tactic t, const Plate& plate) {
    switch (t) {
        case Tactic::Center: return plate.center();
        case Tactic::MinXMinY: return {0, 0};
        case Tactic::MaxXMinY: return {plate.width, 0};
        case Tactic::MinXMaxY: return {0, plate.height};
        case Tactic::MaxXMaxY: return {plate.width, plate.height};
    }
    throw InternalError("unknown tactic");
}

std::string Ordering::name() const {
    switch (kind) {
        case Kind::HeightMinToMax: return "Height-Min-to-Max";
        case Kind::HeightMaxToMin: return "Height-Max-to-Min";
        case Kind::HeightRandom: return "Height-Random";
        case Kind::HeightInput: return "Height-Input";
    }
    throw InternalError("unknown ordering");
}

std::vector<PrintObject> apply_ordering(const Ordering& ordering, std::span<const PrintObject> objects) {
    std::vector<std::size_t> idx(objects.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    switch (ordering.kind) {
        case Ordering::Kind::HeightInput:
            break;
        case Ordering::Kind::HeightMinToMax:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return objects[a].height < objects[b].height; });
            break;
        case Ordering::Kind::HeightMaxToMin:
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return objects[a].height > objects[b].height; });
            break;
        case Ordering::Kind::HeightRandom:
            seeded_shuffle(idx, ordering.seed);
            break;
    }
    std::vector<PrintObject> out;
    out.reserve(objects.size());
    for (std::size_t i : idx) out.push_back(objects[i]);
    return out;
}

} // namespace seqpack
