#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace tabgen {

// Deterministic random stream. All draws are built from raw mt19937_64
// output with hand-rolled transforms, so results do not depend on the
// standard library's distribution implementations. Streams derived from
// (seed, a, b) are independent for distinct tuples, which is what makes
// per-candidate and per-row generation order-independent.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(avalanche(seed)) {}

    static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return RngStream(avalanche(avalanche(avalanche(seed) ^ a) ^ b), internal_tag{});
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Uniform index in [0, n); n must be positive.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

    // SplitMix64 output function.
    static std::uint64_t avalanche(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    struct internal_tag {};
    RngStream(std::uint64_t mixed, internal_tag) : eng_(mixed) {}

    std::mt19937_64 eng_;
};

} // namespace tabgen
