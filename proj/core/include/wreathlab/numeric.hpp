#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace wreathlab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Index of a subgroup: a positive integer or infinity, with the usual
/// absorbing multiplication.
class GroupIndex {
 public:
  static GroupIndex infinite() { return GroupIndex(); }
  static GroupIndex of(Int v) {
    if (v <= 0) throw std::invalid_argument("GroupIndex must be positive");
    GroupIndex g;
    g.finite_ = true;
    g.value_ = std::move(v);
    return g;
  }

  bool is_finite() const { return finite_; }
  const Int& value() const {
    if (!finite_) throw std::logic_error("GroupIndex: value() on infinite index");
    return value_;
  }

  GroupIndex operator*(const GroupIndex& o) const {
    if (!finite_ || !o.finite_) return infinite();
    return of(value_ * o.value_);
  }
  bool operator==(const GroupIndex& o) const {
    return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
  }

  std::string str() const { return finite_ ? value_.str() : std::string("inf"); }

 private:
  bool finite_ = false;
  Int value_ = 0;
};

inline std::int64_t floor_div_i64(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

inline std::int64_t mod_reduce_i64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// i! capped at `cap`; the stage schedule uses this so box widths stay
/// machine-representable.
inline std::int64_t capped_factorial(unsigned n, std::int64_t cap) {
  Int f = factorial(n);
  if (f > cap) return cap;
  return static_cast<std::int64_t>(f);
}

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace wreathlab
