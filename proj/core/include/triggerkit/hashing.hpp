#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace triggerkit {

// 64-bit FNV-1a. Used for content fingerprints and feature hashing; not
// cryptographic, which is fine for staleness detection and bucketing.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Finalizer from splitmix64; decorrelates nearby seeds before bucketing.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string to_hex(std::uint64_t value);

// Order-sensitive accumulator for building fingerprints out of typed parts.
class fingerprint_builder {
public:
    fingerprint_builder& add(std::string_view part) {
        hash_ = fnv1a64(part, hash_);
        hash_ = fnv1a64("|", hash_);
        return *this;
    }
    fingerprint_builder& add(std::uint64_t v) { return add(std::to_string(v)); }
    fingerprint_builder& add(double v);

    std::uint64_t value() const { return hash_; }
    std::string hex() const { return to_hex(hash_); }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

}  // namespace triggerkit
