#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
// the output block is a pure function of (counter, key), so every path and
// every draw within a path can be addressed directly and the results do not
// depend on how paths are distributed across threads.

#include <array>
#include <cstdint>

namespace canput {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(PhiloxCounter& ctr, const PhiloxKey& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    detail::philox_round(ctr, key);
    for (int i = 1; i < 10; ++i) {
        key[0] += detail::kPhiloxW0;
        key[1] += detail::kPhiloxW1;
        detail::philox_round(ctr, key);
    }
    return ctr;
}

/// Uniform on the open interval (0, 1) from one 32-bit word.
inline double u01_from32(std::uint32_t w) { return (static_cast<double>(w) + 0.5) * 0x1p-32; }

/// Uniform on (0, 1) with 52 bits of resolution from two words. (With 53
/// bits the largest midpoint would round up to exactly 1.)
inline double u01_from64(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1p-52;
}

}  // namespace canput
