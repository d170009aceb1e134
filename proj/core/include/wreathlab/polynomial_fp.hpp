#pragma once

#include <cstdint>
#include <vector>

namespace wreathlab {

/// Dense polynomials over Z/p, coefficients low-to-high, trimmed.
/// p is assumed prime (checked by callers that construct ideals).
struct PolyFp {
  std::int64_t p = 2;
  std::vector<std::int64_t> c;  // c[i] multiplies t^i; empty means 0

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

PolyFp poly_trim(PolyFp a);
PolyFp poly_from(std::int64_t p, std::vector<std::int64_t> coeffs);
PolyFp poly_add(const PolyFp& a, const PolyFp& b);
PolyFp poly_sub(const PolyFp& a, const PolyFp& b);
PolyFp poly_mul(const PolyFp& a, const PolyFp& b);
PolyFp poly_scale(const PolyFp& a, std::int64_t s);

/// Quotient and remainder with b != 0.
struct PolyDiv {
  PolyFp quot;
  PolyFp rem;
};
PolyDiv poly_divmod(const PolyFp& a, const PolyFp& b);

/// Monic gcd; gcd(0, 0) = 0.
PolyFp poly_gcd(PolyFp a, PolyFp b);

/// Make monic (leading coefficient 1); zero stays zero.
PolyFp poly_monic(PolyFp a);

/// a^{-1} mod m when gcd(a, m) = 1; throws otherwise.
PolyFp poly_inverse_mod(const PolyFp& a, const PolyFp& m);

/// t^e mod m for any (possibly negative) exponent; requires m(0) != 0 when
/// e < 0.
PolyFp poly_tpow_mod(std::int64_t e, const PolyFp& m);

bool is_prime_i64(std::int64_t n);

}  // namespace wreathlab
