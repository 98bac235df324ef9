#pragma once

#include <cstdint>

namespace svt {

// SplitMix64 stream. Every random draw in the project comes from this
// generator: plain 64-bit integer arithmetic, so sequences are identical
// across platforms, compilers, and thread counts. The n-th output of a
// stream is computable in O(1), which gives cheap keyed substreams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return finalize(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return to_unit(next_u64()); }

  double next_uniform(double lo, double hi) {
    return lo + next_unit() * (hi - lo);
  }

  // Uniform integer in [0, n). Modulo reduction; the bias is far below
  // anything observable for the index ranges used here.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // n-th output of the stream seeded with `seed`, without stepping.
  static std::uint64_t nth(std::uint64_t seed, std::uint64_t n) {
    return finalize(seed + (n + 1) * kGamma);
  }

  static double to_unit(std::uint64_t x) { return (x >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

// Purpose tags keying per-record substreams. Adding draws under one tag
// never shifts draws under another, and never shifts other records.
enum class StreamPurpose : std::uint64_t {
  kScenarioInputs = 1,
  kLaneNoise = 2,
  kSimNoise = 3,
  kModelInit = 4,
  kEpochShuffle = 5,
  kTrainValSplit = 6,
  kForest = 7,
};

// Seed of the record at `index` under `master_seed`. Distinct indices map
// to distinct seeds for a fixed master seed (SplitMix64 outputs never
// repeat within a stream's period).
inline std::uint64_t record_seed(std::uint64_t master_seed,
                                 std::uint64_t index) {
  return SplitMix64::nth(master_seed, index);
}

inline SplitMix64 substream(std::uint64_t seed, StreamPurpose purpose) {
  return SplitMix64(SplitMix64::nth(seed, static_cast<std::uint64_t>(purpose)));
}

// Substream with an extra lane index (e.g. one stream per epoch or per tree).
inline SplitMix64 substream(std::uint64_t seed, StreamPurpose purpose,
                            std::uint64_t lane) {
  return SplitMix64(SplitMix64::nth(
      SplitMix64::nth(seed, static_cast<std::uint64_t>(purpose)), lane));
}

}  // namespace svt
