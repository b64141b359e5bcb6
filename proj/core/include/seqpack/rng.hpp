#pragma once

#include <cstdint>
#include <vector>

namespace seqpack {

// Deterministic PRNG used for every seeded choice in the project. We avoid
// std::uniform_int_distribution because its output is implementation-defined;
// reproducibility across platforms is part of the output contract.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi], closed. Modulo bias is irrelevant next to the
    // reproducibility requirement.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        return lo + next() % (hi - lo + 1);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 rng(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
    rng.next();
    return rng.next();
}

// Fisher-Yates with SplitMix64 draws; the shuffle algorithm is pinned so a
// seed identifies one permutation forever.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    SplitMix64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next() % i);
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

} // namespace seqpack
