// Seeded, cross-platform deterministic PRNG for campaign generation and
// battle simulation.
//
// Algorithm: splitmix64 expands a 64-bit seed into the 256-bit state of a
// xoshiro256++ generator. Child streams are derived by FNV-1a hashing the
// parent seed together with a text label, so stream derivation is positional
// (independent of how many values the parent has produced). Identical seeds
// produce bit-identical sequences on every platform.

#ifndef OWH_RNG_HPP
#define OWH_RNG_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace owh {

// FNV-1a 64-bit hash, used for stream derivation and config fingerprints.
uint64_t fnv1a64(std::string_view bytes, uint64_t basis = 0xCBF29CE484222325ull);

class RngState {
public:
    RngState() : RngState(0) {}
    explicit RngState(uint64_t seed);

    // Next raw 64-bit value (xoshiro256++ core).
    uint64_t next_u64();

    // Uniform double in [0, 1), 53-bit resolution.
    double u01();

    // Deterministic child stream from (this stream's seed, label).
    // Does not advance this stream.
    RngState derive(std::string_view label) const;

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
    std::array<uint64_t, 4> state_;
};

// Stateless unit draw from a hash of (seed, label) — used where a pure
// function of world state must roll dice (per-tick sensor effects) without
// mutating the battle stream.
double hashed_u01(uint64_t seed, std::string_view label);

} // namespace owh

#endif // OWH_RNG_HPP
