#pragma once

// Counter-based random streams (Philox4x32-10). A draw is a pure function of
// (seed, stream, index), so parallel loops reproduce serial output exactly
// no matter how work is scheduled.

#include <array>
#include <cmath>
#include <cstdint>

namespace mtconf::rng {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {
inline constexpr std::uint32_t kMulA = 0xD2511F53u;
inline constexpr std::uint32_t kMulB = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeylA = 0x9E3779B9u;
inline constexpr std::uint32_t kWeylB = 0xBB67AE85u;

constexpr void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

constexpr Block round(const Block& ctr, const Key& key) {
  std::uint32_t lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
  mulhilo(kMulA, ctr[0], lo0, hi0);
  mulhilo(kMulB, ctr[2], lo1, hi1);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}
}  // namespace detail

/// Ten-round Philox4x32 block function.
constexpr Block philox4x32(Block ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += detail::kWeylA;
      key[1] += detail::kWeylB;
    }
    ctr = detail::round(ctr, key);
  }
  return ctr;
}

/// SplitMix64 finalizer; used to derive stream ids from structured tags.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_id(std::uint64_t tag, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(tag ^ mix64(a)) ^ b);
}

/// Uniform double in the open interval (0, 1) with 52 random bits.
constexpr double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

class Stream {
 public:
  constexpr Stream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  Block block(std::uint64_t index) const {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream_),
                       static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
  }

  double uniform(std::uint64_t index) const {
    const Block b = block(index);
    return to_unit(b[0], b[1]);
  }

  /// Box-Muller on the two uniforms of one block.
  double normal(std::uint64_t index) const {
    const Block b = block(index);
    const double u1 = to_unit(b[0], b[1]);
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  Key key_;
  std::uint64_t stream_;
};

// Stream tags. Distinct tags keep unrelated draws independent under one seed.
inline constexpr std::uint64_t kTagHypothesisStatus = 0x4801;
inline constexpr std::uint64_t kTagStatistic = 0x5402;
inline constexpr std::uint64_t kTagStratum = 0x5303;
inline constexpr std::uint64_t kTagBootstrapMean = 0x4204;
inline constexpr std::uint64_t kTagBootstrapStat = 0x4205;
inline constexpr std::uint64_t kTagExpression = 0x4506;
inline constexpr std::uint64_t kTagLabel = 0x4c07;

}  // namespace mtconf::rng
