#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace zkit {

/// Seedable randomness source. Every random choice in the toolkit flows
/// through one of these so that runs are reproducible from a seed.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard;
/// distributions are derived here from raw 64-bit words (the std
/// distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);

  /// Independent child stream; advances this stream by one word.
  Rng split() { return Rng(next_u64()); }

 private:
  std::mt19937_64 engine_;
};

/// Stable 64-bit seed from a label (FNV-1a), for deriving named streams.
std::uint64_t seed_from_label(std::string_view label, std::uint64_t salt = 0);

}  // namespace zkit
