#include "wreathlab/rng.hpp"

namespace wreathlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = ~0ULL - ~0ULL % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> labels) {
  // FNV-1a over the labels, folded into the master seed via splitmix.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ master;
  for (auto label : labels) {
    for (unsigned char c : label) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x9e;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t x = h;
  splitmix64(x);
  return splitmix64(x);
}

}  // namespace wreathlab
