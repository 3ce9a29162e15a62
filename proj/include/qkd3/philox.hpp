#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// Every output block is a pure function of (key, counter), so a stream can be
// split by assigning disjoint counter ranges. Protocol rounds use counter
// (round_lo, round_hi, stream_tag, 0); auxiliary streams use a different tag.

#include <array>
#include <cstdint>

namespace qkd3 {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

constexpr PhiloxKey philox_key(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// 53-bit uniform double in [0, 1) from two 32-bit words.
constexpr double uniform01(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

/// Sequential stream over one (seed, tag) counter range. Cheap to copy.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint32_t tag) noexcept
        : key_(philox_key(seed)), tag_(tag) {}

    std::uint32_t next_u32() noexcept {
        if (used_ == 4) refill();
        return block_[used_++];
    }

    double next_double() noexcept {
        const std::uint32_t hi = next_u32();
        return uniform01(hi, next_u32());
    }

    /// Unbiased integer in [0, bound), bound > 0 (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t hi = next_u32();
            const std::uint64_t x = (hi << 32) | next_u32();
            __extension__ using u128 = unsigned __int128;
            const u128 m = static_cast<u128>(x) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold)
                return static_cast<std::uint64_t>(m >> 64);
        }
    }

private:
    void refill() noexcept {
        block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                                static_cast<std::uint32_t>(counter_ >> 32), tag_, 0u},
                               key_);
        ++counter_;
        used_ = 0;
    }

    PhiloxKey key_;
    std::uint32_t tag_;
    std::uint64_t counter_ = 0;
    PhiloxBlock block_{};
    int used_ = 4;
};

}  // namespace qkd3
