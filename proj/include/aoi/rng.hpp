#pragma once

#include <cmath>
#include <cstdint>

// All randomness flows through SplitMix64 sequences so results are
// reproducible bit for bit. Stream `tag` of a master seed is the sequence
// mix64(base + i * kGolden), i = 0, 1, ..., with base = stream_seed(master,
// tag). The i-th draw can be produced either by stepping a Stream or by
// direct indexing with u01_at, which is what the parallel kernels rely on to
// stay independent of the thread count.

namespace aoi::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// stream tags used across the project
inline constexpr std::uint64_t kFadingStream = 0;
inline constexpr std::uint64_t kArrivalStreamBase = 1;  // sensor j uses tag 1 + j
inline constexpr std::uint64_t kSearchStream = 1ull << 16;

inline constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
  return mix64(master + kGolden * (tag + 1));
}

// 64 random bits -> double in the open interval (0, 1)
inline constexpr double u01_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double u01_at(std::uint64_t stream_base, std::uint64_t index) {
  return u01_open(mix64(stream_base + kGolden * index));
}

struct Stream {
  std::uint64_t base;
  std::uint64_t index = 0;

  Stream(std::uint64_t master, std::uint64_t tag) : base(stream_seed(master, tag)) {}

  std::uint64_t next_bits() { return mix64(base + kGolden * index++); }
  double next_u01() { return u01_open(next_bits()); }
  // inverse-CDF exponential; the open u01 interval keeps it finite and positive
  double next_exponential(double rate) { return -std::log1p(-next_u01()) / rate; }
};

}  // namespace aoi::rng
