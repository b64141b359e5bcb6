#pragma once

#include "seqpack/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seqpack {

// Where the shrinking plate collapses to: its center, or one of the four
// corners.
enum class Tactic { Center, MinXMinY, MaxXMinY, MinXMaxY, MaxXMaxY };

const char* tactic_name(Tactic t);

// The fixed point of scale_plate for this tactic.
Point2 tactic_anchor(Tactic t, const Plate& plate);

// How the remaining objects are ranked before groups are carved off the
// front. Height is the decisive property for sequential printing, so three
// of the four orderings key on it.
struct Ordering {
    enum class Kind { HeightMinToMax, HeightMaxToMin, HeightRandom, HeightInput };

    Kind kind = Kind::HeightInput;
    std::uint64_t seed = 0; // used by HeightRandom only

    std::string name() const;
};

// Permutation of the input per the ordering's rule; height ties keep input
// order (stable sort). HeightRandom is a seeded deterministic shuffle.
std::vector<PrintObject> apply_ordering(const Ordering& ordering, std::span<const PrintObject> objects);

struct CompositeStrategy {
    Tactic tactic = Tactic::Center;
    Ordering ordering;

    std::string name() const { return std::string(tactic_name(tactic)) + "/" + ordering.name(); }
};

} // namespace seqpack
