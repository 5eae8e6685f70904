#pragma once

#include <cstdint>

namespace psmatch {

// splitmix64: a bijective 64-bit mixer stepped by a Weyl increment. Tiny,
// fast, and consecutive integer seeds give statistically independent
// streams, which is exactly what per-replication seeding needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0,1): 53-bit grid offset by half a step,
    // so neither endpoint can occur and normal() below never sees 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform on [-1/2, 1/2).
    double uniform_centered() { return uniform() - 0.5; }

    // Standard normal via the inverse-CDF transform; deterministic across
    // platforms, unlike ziggurat or <random> implementations.
    double normal();

private:
    std::uint64_t state_;
};

} // namespace psmatch
