// Counter-based random numbers: Philox4x32-10 keyed by (seed, stream),
// counted by (path, draw). Any (seed, path, draw) triple maps to the same
// output regardless of call order or thread count.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace circlang::rng {

namespace detail {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

// One 10-round Philox4x32 block: 128-bit counter, 64-bit key -> 128 random bits.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(M0, ctr[0], hi0, lo0);
        detail::mulhilo(M1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// Stateless stream of N(0,1) draws for one path of one simulation.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream_tag = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path)),
          path_hi_(static_cast<std::uint32_t>(path >> 32)),
          tag_(stream_tag) {}

    // Box-Muller pair from one Philox block; draw index selects the block.
    double normal(std::uint64_t draw) const {
        const std::uint64_t blk = draw >> 1;
        const auto r = philox4x32({static_cast<std::uint32_t>(blk),
                                   static_cast<std::uint32_t>(blk >> 32) ^ tag_,
                                   path_lo_, path_hi_},
                                  key_);
        const double u1 = u01(r[0], r[1]);
        const double u2 = u01(r[2], r[3]);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        return (draw & 1) ? rad * std::sin(ang) : rad * std::cos(ang);
    }

  private:
    // 53-bit uniform in (0,1]; never returns 0 so log() is safe.
    static double u01(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t x = (static_cast<std::uint64_t>(a) << 21) ^ b;
        return (static_cast<double>(x & ((1ull << 53) - 1)) + 1.0) * 0x1p-53;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_, path_hi_, tag_;
};

}  // namespace circlang::rng
