#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace wreathlab {

/// xoshiro256** with splitmix64 seeding. Self-contained so that seeded runs
/// reproduce bit-identically across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi);

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t s_[4];
};

/// Derives an independent stream from (master seed, labels...). Statistics,
/// stages and words each get their own stream so results do not depend on
/// evaluation order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels);

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view a) {
  return derive_seed(master, {a});
}
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view a, std::string_view b) {
  return derive_seed(master, {a, b});
}

}  // namespace wreathlab
