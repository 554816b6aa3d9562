#pragma once

#include <cstdint>
#include <random>

namespace cdi {

/// Seedable 64-bit stream built on std::mt19937_64, whose output sequence is
/// fixed by the C++ standard. Reals use the top 53 bits divided by 2^53;
/// bounded integers use rejection sampling, so no implementation-defined
/// distribution objects are involved and runs reproduce across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on the closed integer range [lo, hi].
  int between(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent per-item seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace cdi
