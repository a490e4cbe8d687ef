#pragma once

#include <cstdint>
#include <string_view>

namespace slotshift {

/// Splitmix64 generator. Used instead of <random> engines+distributions so
/// that output streams are identical across standard library implementations
/// (the byte-stable artifact contract depends on it).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1), never an exact endpoint.
    double uniform_open() {
        double v;
        do {
            v = uniform();
        } while (v == 0.0);
        return v;
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    /// Derive an independent stream keyed on (this seed, tag, index).
    Rng fork(std::string_view tag, std::uint64_t index = 0) const {
        std::uint64_t h = state_ ^ 0x51'7c'c1'b7'27'22'0a'95ULL;
        for (char c : tag) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL;
        h = (h ^ index) * 0x100000001b3ULL;
        return Rng(h);
    }

private:
    std::uint64_t state_;
};

}  // namespace slotshift
