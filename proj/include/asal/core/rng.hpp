#pragma once

#include <cstdint>

namespace asal {

/// Counter-based generator: draw n of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, n), so evaluation order never matters.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n);
  /// Standard normal via Box-Muller; consumes two draws.
  double normal();

  std::uint64_t counter() const { return counter_; }
  std::uint64_t key() const { return key_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Rng make_rng(std::uint64_t seed, std::uint64_t stream_id);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Stream ids reserved by the library. Callers may use any other value.
inline constexpr std::uint64_t kInitStream = 0;
inline constexpr std::uint64_t kAskStreamBase = 1ULL << 32;
inline constexpr std::uint64_t kGaStreamBase = 2ULL << 32;

}  // namespace asal
