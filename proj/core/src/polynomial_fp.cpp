#include "wreathlab/polynomial_fp.hpp"

#include <stdexcept>

#include "wreathlab/numeric.hpp"

namespace wreathlab {

namespace {

std::int64_t inv_mod_p(std::int64_t a, std::int64_t p) {
  // Extended Euclid; p prime and a != 0 mod p.
  std::int64_t t = 0, new_t = 1, r = p, new_r = mod_reduce_i64(a, p);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::invalid_argument("inv_mod_p: not invertible");
  return mod_reduce_i64(t, p);
}

}  // namespace

PolyFp poly_trim(PolyFp a) {
  for (auto& x : a.c) x = mod_reduce_i64(x, a.p);
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  return a;
}

PolyFp poly_from(std::int64_t p, std::vector<std::int64_t> coeffs) {
  PolyFp a;
  a.p = p;
  a.c = std::move(coeffs);
  return poly_trim(std::move(a));
}

PolyFp poly_add(const PolyFp& a, const PolyFp& b) {
  PolyFp r;
  r.p = a.p;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return poly_trim(std::move(r));
}

PolyFp poly_sub(const PolyFp& a, const PolyFp& b) {
  PolyFp r;
  r.p = a.p;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  return poly_trim(std::move(r));
}

PolyFp poly_mul(const PolyFp& a, const PolyFp& b) {
  if (a.is_zero() || b.is_zero()) return PolyFp{a.p, {}};
  PolyFp r;
  r.p = a.p;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      r.c[i + j] = mod_reduce_i64(r.c[i + j] + a.c[i] * b.c[j], r.p);
    }
  }
  return poly_trim(std::move(r));
}

PolyFp poly_scale(const PolyFp& a, std::int64_t s) {
  PolyFp r = a;
  for (auto& x : r.c) x *= s;
  return poly_trim(std::move(r));
}

PolyDiv poly_divmod(const PolyFp& a, const PolyFp& b) {
  if (b.is_zero()) throw std::invalid_argument("poly_divmod: division by zero");
  PolyDiv out;
  out.quot.p = a.p;
  out.rem = a;
  if (a.is_zero() || a.degree() < b.degree()) return out;
  out.quot.c.assign(a.c.size() - b.c.size() + 1, 0);
  std::int64_t lead_inv = inv_mod_p(b.c.back(), b.p);
  std::vector<std::int64_t> rem = a.c;
  for (int i = static_cast<int>(rem.size()) - 1; i >= b.degree(); --i) {
    std::int64_t coef = mod_reduce_i64(rem[i] * lead_inv, b.p);
    if (coef == 0) continue;
    out.quot.c[i - b.degree()] = coef;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      std::size_t k = i - b.degree() + j;
      rem[k] = mod_reduce_i64(rem[k] - coef * b.c[j], b.p);
    }
  }
  out.rem = poly_from(a.p, std::move(rem));
  out.quot = poly_trim(std::move(out.quot));
  return out;
}

PolyFp poly_monic(PolyFp a) {
  a = poly_trim(std::move(a));
  if (a.is_zero()) return a;
  return poly_scale(a, inv_mod_p(a.c.back(), a.p));
}

PolyFp poly_gcd(PolyFp a, PolyFp b) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!b.is_zero()) {
    PolyFp r = poly_divmod(a, b).rem;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(std::move(a));
}

PolyFp poly_inverse_mod(const PolyFp& a, const PolyFp& m) {
  // Extended Euclid in F_p[t].
  PolyFp old_r = poly_divmod(a, m).rem, r = m;
  PolyFp old_s = poly_from(a.p, {1}), s = PolyFp{a.p, {}};
  if (old_r.is_zero()) throw std::invalid_argument("poly_inverse_mod: not invertible");
  while (!r.is_zero()) {
    auto d = poly_divmod(old_r, r);
    PolyFp tmp_r = d.rem;
    PolyFp tmp_s = poly_sub(old_s, poly_mul(d.quot, s));
    old_r = std::move(r);
    r = std::move(tmp_r);
    old_s = std::move(s);
    s = std::move(tmp_s);
  }
  if (old_r.degree() != 0) throw std::invalid_argument("poly_inverse_mod: not invertible");
  std::int64_t scale = inv_mod_p(old_r.c[0], a.p);
  return poly_divmod(poly_scale(old_s, scale), m).rem;
}

PolyFp poly_tpow_mod(std::int64_t e, const PolyFp& m) {
  if (m.degree() == 0) return PolyFp{m.p, {}};  // everything is 0 mod a unit
  PolyFp t = poly_divmod(poly_from(m.p, {0, 1}), m).rem;
  PolyFp base = t;
  if (e < 0) {
    base = poly_inverse_mod(t, m);
    e = -e;
  }
  PolyFp acc = poly_from(m.p, {1});
  acc = poly_divmod(acc, m).rem;
  while (e > 0) {
    if (e & 1) acc = poly_divmod(poly_mul(acc, base), m).rem;
    base = poly_divmod(poly_mul(base, base), m).rem;
    e >>= 1;
  }
  return acc;
}

bool is_prime_i64(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace wreathlab
