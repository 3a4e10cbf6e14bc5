#pragma once

#include <cstdint>
#include <string_view>

namespace rocq {

// Stable, platform-independent hashing for RNG stream keys and provenance
// digests. Not cryptographic.

inline constexpr std::uint64_t kFnv1a64Offset = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnv1a64Prime = 1099511628211ULL;

constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = kFnv1a64Offset) {
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= kFnv1a64Prime;
    }
    return h;
}

// splitmix64 step with the counter folded in; bijective on u64.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable key for a two-part name, with a separator byte so that
// ("ab","c") and ("a","bc") hash differently.
constexpr std::uint64_t stream_key(std::string_view a, std::string_view b) {
    std::uint64_t h = fnv1a64(a);
    h ^= 0x1f;
    h *= kFnv1a64Prime;
    return fnv1a64(b, h);
}

}  // namespace rocq
