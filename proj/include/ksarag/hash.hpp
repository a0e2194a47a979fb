#pragma once
// Stable 64-bit FNV-1a. std::hash is not portable across implementations, so
// everything that must be reproducible (feature hashing, file checksums,
// manifest content hashes) goes through this.

#include <cstdint>
#include <string>
#include <string_view>

namespace ksarag {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

// Folds a numeric seed into the running hash before the payload, so distinct
// seeds yield unrelated hash families.
constexpr std::uint64_t fnv1a64_seeded(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = kFnvOffset;
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(seed >> (i * 8));
        h *= kFnvPrime;
    }
    return fnv1a64(bytes, h);
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace ksarag
