#include "owh/rng.hpp"

#include <cstring>

namespace owh {

uint64_t fnv1a64(std::string_view bytes, uint64_t basis) {
    uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= static_cast<uint64_t>(c);
        h *= 0x00000100000001B3ull;
    }
    return h;
}

namespace {

uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngState::RngState(uint64_t seed) : seed_(seed) {
    uint64_t sm = seed;
    for (auto& word : state_) {
        word = splitmix64(sm);
    }
}

uint64_t RngState::next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngState::u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngState RngState::derive(std::string_view label) const {
    char seed_bytes[8];
    uint64_t le = seed_;
    for (int i = 0; i < 8; ++i) {
        seed_bytes[i] = static_cast<char>(le & 0xFF);
        le >>= 8;
    }
    uint64_t h = fnv1a64(std::string_view(seed_bytes, 8));
    h = fnv1a64(label, h);
    return RngState(h);
}

double hashed_u01(uint64_t seed, std::string_view label) {
    RngState g = RngState(seed).derive(label);
    return g.u01();
}

} // namespace owh
