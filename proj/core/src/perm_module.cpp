#include "wreathlab/perm_module.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wreathlab {

QSet::QSet(FgAbelianGroup q, std::vector<AbelianSubgroup> stabilizers,
           std::vector<std::string> basepoint_labels)
    : group_(std::move(q)), stabilizers_(std::move(stabilizers)), labels_(std::move(basepoint_labels)) {
  if (stabilizers_.empty()) throw std::invalid_argument("QSet needs at least one orbit");
  for (const auto& s : stabilizers_)
    if (!(s.ambient() == group_)) throw std::invalid_argument("stabilizer not a subgroup of Q");
  if (labels_.empty())
    for (std::size_t l = 0; l < stabilizers_.size(); ++l) labels_.push_back("x" + std::to_string(l));
  if (labels_.size() != stabilizers_.size())
    throw std::invalid_argument("one basepoint label per orbit");
}

XPoint QSet::point(std::size_t orbit, const AbelianElement& coset) const {
  if (orbit >= stabilizers_.size()) throw std::invalid_argument("orbit index out of range");
  return XPoint{orbit, stabilizers_[orbit].residue(coset)};
}

XPoint QSet::act(const AbelianElement& q, const XPoint& x) const {
  return point(x.orbit, group_.add(q, x.coset));
}

GroupIndex QSet::size() const {
  Int sum = 0;
  for (std::size_t l = 0; l < orbit_count(); ++l) {
    auto s = orbit_size(l);
    if (!s.is_finite()) return GroupIndex::infinite();
    sum += s.value();
  }
  return GroupIndex::of(sum);
}

bool QSet::is_finite() const { return size().is_finite(); }

std::vector<XPoint> QSet::all_points() const {
  std::vector<XPoint> pts;
  for (std::size_t l = 0; l < orbit_count(); ++l) {
    for (const auto& rep : quotient_representatives(stabilizers_[l])) pts.push_back(XPoint{l, rep});
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

PermModule::PermModule(QSet x, FgAbelianGroup base) : x_(std::move(x)), base_(std::move(base)) {}

ModuleElement PermModule::delta(const XPoint& x, const AbelianElement& value) const {
  AbelianElement v = base_.reduce(value);
  ModuleElement n;
  if (!v.is_zero()) n.set_raw(x_.point(x.orbit, x.coset), std::move(v));
  return n;
}

ModuleElement PermModule::from_pairs(
    const std::vector<std::pair<XPoint, AbelianElement>>& pairs) const {
  std::map<XPoint, AbelianElement> acc;
  for (const auto& [x, v] : pairs) {
    XPoint cx = x_.point(x.orbit, x.coset);
    auto it = acc.find(cx);
    if (it == acc.end())
      acc.emplace(std::move(cx), base_.reduce(v));
    else
      it->second = base_.add(it->second, v);
  }
  ModuleElement n;
  for (auto& [x, v] : acc)
    if (!v.is_zero()) n.set_raw(x, std::move(v));
  return n;
}

AbelianElement PermModule::value_at(const ModuleElement& n, const XPoint& x) const {
  XPoint cx = x_.point(x.orbit, x.coset);
  auto it = n.support().find(cx);
  return it == n.support().end() ? base_.zero() : it->second;
}

ModuleElement PermModule::add(const ModuleElement& a, const ModuleElement& b) const {
  std::map<XPoint, AbelianElement> acc(a.support().begin(), a.support().end());
  for (const auto& [x, v] : b.support()) {
    auto it = acc.find(x);
    if (it == acc.end())
      acc.emplace(x, v);
    else
      it->second = base_.add(it->second, v);
  }
  ModuleElement n;
  for (auto& [x, v] : acc)
    if (!v.is_zero()) n.set_raw(x, std::move(v));
  return n;
}

ModuleElement PermModule::neg(const ModuleElement& a) const {
  ModuleElement n;
  for (const auto& [x, v] : a.support()) n.set_raw(x, base_.neg(v));
  return n;
}

ModuleElement PermModule::sub(const ModuleElement& a, const ModuleElement& b) const {
  return add(a, neg(b));
}

ModuleElement PermModule::scale(const ModuleElement& a, std::int64_t c) const {
  ModuleElement n;
  for (const auto& [x, v] : a.support()) {
    AbelianElement sv = base_.scale(v, c);
    if (!sv.is_zero()) n.set_raw(x, std::move(sv));
  }
  return n;
}

ModuleElement PermModule::act(const AbelianElement& q, const ModuleElement& n) const {
  AbelianElement mq = x_.group().neg(q);
  ModuleElement out;
  for (const auto& [x, v] : n.support()) out.set_raw(x_.act(mq, x), v);
  return out;
}

GroupIndex PermModule::order() const {
  GroupIndex b = base_.order();
  if (b.is_finite() && b.value() == 1) return GroupIndex::of(1);
  GroupIndex xs = x_.size();
  if (!b.is_finite() || !xs.is_finite()) return GroupIndex::infinite();
  Int total = 1;
  for (Int i = 0; i < xs.value(); ++i) total *= b.value();
  return GroupIndex::of(total);
}

std::vector<XPoint> window_points(const std::vector<AbelianElement>& i_set, const QSet& x) {
  std::set<XPoint> pts;
  for (std::size_t l = 0; l < x.orbit_count(); ++l)
    for (const auto& b : i_set) pts.insert(x.point(l, b));
  return std::vector<XPoint>(pts.begin(), pts.end());
}

FactorMap::FactorMap(PermModule source, AbelianSubgroup v) : source_(std::move(source)), v_(std::move(v)) {
  const auto& x = source_.xset();
  if (!(v_.ambient() == x.group())) throw std::invalid_argument("factor kernel not a subgroup of Q");
  std::vector<AbelianSubgroup> stabs;
  for (std::size_t l = 0; l < x.orbit_count(); ++l)
    stabs.push_back(sum_subgroups(x.stabilizer(l), v_));
  target_ = PermModule(QSet(x.group(), std::move(stabs), x.labels()), source_.base());
}

XPoint FactorMap::push_point(const XPoint& x) const {
  return target_.xset().point(x.orbit, x.coset);
}

ModuleElement FactorMap::push(const ModuleElement& n) const {
  std::vector<std::pair<XPoint, AbelianElement>> pairs;
  pairs.reserve(n.support_size());
  for (const auto& [x, v] : n.support()) pairs.emplace_back(push_point(x), v);
  return target_.from_pairs(pairs);
}

XPoint FactorMap::section_point(const XPoint& xbar) const {
  return source_.xset().point(xbar.orbit, xbar.coset);
}

ModuleElement FactorMap::section(const ModuleElement& nbar) const {
  ModuleElement out;
  for (const auto& [x, v] : nbar.support()) out.set_raw(section_point(x), v);
  return out;
}

ModuleElement FactorMap::pull_within(const ModuleElement& nbar, const std::vector<XPoint>& y) const {
  GroupIndex xbar_size = target_.xset().size();
  if (!xbar_size.is_finite()) throw std::invalid_argument("pull_within: infinite factor target");
  std::map<XPoint, XPoint> lift;
  for (const auto& p : y) {
    XPoint cp = source_.xset().point(p.orbit, p.coset);
    auto [it, fresh] = lift.emplace(push_point(cp), cp);
    if (!fresh) throw std::invalid_argument("pull_within: Y meets a fiber twice");
  }
  if (Int(lift.size()) != xbar_size.value())
    throw std::invalid_argument("pull_within: Y misses a fiber");
  ModuleElement out;
  for (const auto& [x, v] : nbar.support()) {
    auto it = lift.find(x);
    assert(it != lift.end());
    out.set_raw(it->second, v);
  }
  return out;
}

namespace {

std::vector<XPoint> canonical_window(const PermModule& mod, std::vector<XPoint> window) {
  for (auto& p : window) p = mod.xset().point(p.orbit, p.coset);
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  return window;
}

lat::Mat window_relations(const FgAbelianGroup& b, std::size_t points) {
  lat::Mat rel;
  std::size_t r = b.rank();
  for (std::size_t s = 0; s < points; ++s) {
    for (std::size_t j = 0; j < b.torsion_moduli().size(); ++j) {
      lat::Vec col(points * r, 0);
      col[s * r + b.free_rank() + j] = b.torsion_moduli()[j];
      rel.push_back(std::move(col));
    }
  }
  return rel;
}

}  // namespace

WindowLattice::WindowLattice(PermModule mod, std::vector<XPoint> window, lat::Mat columns)
    : mod_(std::move(mod)), window_(canonical_window(mod_, std::move(window))) {
  auto rel = window_relations(mod_.base(), window_.size());
  columns.insert(columns.end(), rel.begin(), rel.end());
  hnf_ = lat::hermite(std::move(columns), dim());
}

WindowLattice WindowLattice::zero(const PermModule& mod, std::vector<XPoint> window) {
  return WindowLattice(mod, std::move(window), {});
}

WindowLattice WindowLattice::full(const PermModule& mod, std::vector<XPoint> window) {
  WindowLattice w = zero(mod, std::move(window));
  lat::Mat cols;
  for (std::size_t i = 0; i < w.dim(); ++i) {
    lat::Vec e(w.dim(), 0);
    e[i] = 1;
    cols.push_back(std::move(e));
  }
  return WindowLattice(w.mod_, w.window_, std::move(cols));
}

WindowLattice WindowLattice::from_elements(const PermModule& mod, std::vector<XPoint> window,
                                           const std::vector<ModuleElement>& gens) {
  WindowLattice empty = zero(mod, std::move(window));
  lat::Mat cols;
  for (const auto& g : gens) {
    auto v = empty.flatten(g);
    if (!v) throw std::invalid_argument("window lattice generator outside window");
    cols.push_back(std::move(*v));
  }
  return WindowLattice(empty.mod_, empty.window_, std::move(cols));
}

std::optional<lat::Vec> WindowLattice::flatten(const ModuleElement& n) const {
  lat::Vec v(dim(), 0);
  std::size_t r = mod_.base().rank();
  for (const auto& [x, val] : n.support()) {
    auto it = std::lower_bound(window_.begin(), window_.end(), x);
    if (it == window_.end() || !(*it == x)) return std::nullopt;
    std::size_t slot = static_cast<std::size_t>(it - window_.begin());
    for (std::size_t i = 0; i < r; ++i) v[slot * r + i] = val.coords[i];
  }
  return v;
}

ModuleElement WindowLattice::unflatten(const lat::Vec& v) const {
  std::size_t r = mod_.base().rank();
  ModuleElement out;
  for (std::size_t s = 0; s < window_.size(); ++s) {
    AbelianElement val;
    val.coords.resize(r);
    for (std::size_t i = 0; i < r; ++i) val.coords[i] = static_cast<std::int64_t>(v[s * r + i]);
    val = mod_.base().reduce(std::move(val));
    if (!val.is_zero()) out.set_raw(window_[s], std::move(val));
  }
  return out;
}

bool WindowLattice::contains(const ModuleElement& n) const {
  auto v = flatten(n);
  if (!v) return false;
  return lat::contains(hnf_, *v);
}

ModuleElement WindowLattice::reduce(const ModuleElement& n) const {
  auto v = flatten(n);
  if (!v) throw std::invalid_argument("WindowLattice::reduce: support outside window");
  return unflatten(lat::residue(hnf_, std::move(*v)));
}

GroupIndex WindowLattice::index_in_window() const {
  auto det = lat::index_in_ambient(hnf_, dim());
  if (!det) return GroupIndex::infinite();
  return GroupIndex::of(*det);
}

std::vector<ModuleElement> WindowLattice::quotient_representatives() const {
  if (!index_in_window().is_finite())
    throw std::invalid_argument("quotient_representatives: infinite index");
  std::size_t n = dim();
  std::vector<std::int64_t> radix(n, 1);
  std::size_t row = 0;
  for (std::size_t j = 0; j < hnf_.size(); ++j) {
    while (row < n && hnf_[j][row] == 0) ++row;
    radix[row] = static_cast<std::int64_t>(hnf_[j][row]);
    ++row;
  }
  std::vector<ModuleElement> reps;
  std::vector<std::int64_t> digits(n, 0);
  while (true) {
    lat::Vec v(n);
    for (std::size_t c = 0; c < n; ++c) v[c] = digits[c];
    reps.push_back(unflatten(v));
    std::size_t i = n;
    bool done = true;
    while (i > 0) {
      --i;
      if (++digits[i] < radix[i]) {
        done = false;
        break;
      }
      digits[i] = 0;
    }
    if (done) return reps;
  }
}

std::vector<ModuleElement> WindowLattice::generators() const {
  std::vector<ModuleElement> gens;
  for (const auto& col : hnf_) {
    ModuleElement g = unflatten(col);
    if (!g.is_zero()) gens.push_back(std::move(g));
  }
  return gens;
}

WindowLattice sum_window_lattices(const WindowLattice& a, const WindowLattice& b) {
  if (!(a.window() == b.window())) throw std::invalid_argument("window mismatch in lattice sum");
  lat::Mat cols = a.lattice();
  cols.insert(cols.end(), b.lattice().begin(), b.lattice().end());
  return WindowLattice(a.module(), a.window(), std::move(cols));
}

WindowLattice intersect_window_lattices(const WindowLattice& a, const WindowLattice& b) {
  if (!(a.window() == b.window()))
    throw std::invalid_argument("window mismatch in lattice intersection");
  return WindowLattice(a.module(), a.window(),
                       lat::intersect(a.lattice(), b.lattice(), a.dim()));
}

namespace {

bool is_laurent_module(const PermModule& mod) {
  const auto& b = mod.base();
  const auto& x = mod.xset();
  return b.free_rank() == 0 && b.torsion_moduli().size() == 1 &&
         is_prime_i64(b.torsion_moduli()[0]) && x.group().free_rank() == 1 &&
         x.group().torsion_moduli().empty() && x.orbit_count() == 1 &&
         x.stabilizer(0) == AbelianSubgroup::trivial(x.group());
}

std::int64_t laurent_exponent(const XPoint& x) { return x.coset.coords[0]; }

// Sparse module element as a shifted dense polynomial: n = t^shift * poly.
std::pair<PolyFp, std::int64_t> to_poly(const PermModule& mod, const ModuleElement& n) {
  std::int64_t p = mod.base().torsion_moduli()[0];
  if (n.is_zero()) return {PolyFp{p, {}}, 0};
  std::int64_t lo = laurent_exponent(n.support().begin()->first);
  std::int64_t hi = laurent_exponent(n.support().rbegin()->first);
  std::vector<std::int64_t> coeffs(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& [x, v] : n.support()) coeffs[laurent_exponent(x) - lo] = v.coords[0];
  return {poly_from(p, std::move(coeffs)), lo};
}

ModuleElement from_poly(const PermModule& mod, const PolyFp& poly, std::int64_t shift) {
  std::vector<std::pair<XPoint, AbelianElement>> pairs;
  for (std::size_t i = 0; i < poly.c.size(); ++i) {
    if (poly.c[i] == 0) continue;
    pairs.emplace_back(XPoint{0, AbelianElement{{shift + static_cast<std::int64_t>(i)}}},
                       AbelianElement{{poly.c[i]}});
  }
  return mod.from_pairs(pairs);
}

PolyFp normalize_laurent_generator(PolyFp g) {
  g = poly_trim(std::move(g));
  if (g.is_zero()) return g;
  std::size_t v = 0;
  while (g.c[v] == 0) ++v;
  if (v > 0) g.c.erase(g.c.begin(), g.c.begin() + v);
  return poly_monic(std::move(g));
}

// The quotient ideal (g : u) = {m : u m in (g)} for principal Laurent ideals,
// as a normalized polynomial generator; u, g given as polynomials.
PolyFp ideal_quotient(const PolyFp& g, const PolyFp& u) {
  if (u.is_zero()) return poly_from(g.p, {1});  // everything lands in (g)+...: 0*m = 0
  if (g.is_zero()) return PolyFp{g.p, {}};      // u m = 0 forces m = 0 in a domain
  PolyFp d = poly_gcd(g, u);
  return normalize_laurent_generator(poly_divmod(g, d).quot);
}

PolyFp ideal_lcm(const PolyFp& a, const PolyFp& b) {
  if (a.is_zero() || b.is_zero()) return PolyFp{a.p, {}};
  PolyFp d = poly_gcd(a, b);
  return normalize_laurent_generator(poly_mul(poly_divmod(a, d).quot, b));
}

}  // namespace

Submodule Submodule::finite_x(WindowLattice lattice_over_all_x) {
  const auto& mod = lattice_over_all_x.module();
  if (!mod.xset().is_finite()) throw UnsupportedError("FiniteX submodule requires finite X");
  if (!(lattice_over_all_x.window() == mod.xset().all_points()))
    throw std::invalid_argument("FiniteX submodule must be windowed over all of X");
  Submodule s;
  s.kind_ = Kind::FiniteX;
  s.mod_ = mod;
  s.finite_ = std::move(lattice_over_all_x);
  return s;
}

Submodule Submodule::laurent(const PermModule& mod, PolyFp generator) {
  if (!is_laurent_module(mod))
    throw UnsupportedError("Laurent ideals need B = Z/p (p prime) and X = Q = Z");
  generator.p = mod.base().torsion_moduli()[0];
  Submodule s;
  s.kind_ = Kind::LaurentIdeal;
  s.mod_ = mod;
  s.gen_ = normalize_laurent_generator(std::move(generator));
  return s;
}

Submodule Submodule::laurent_from_generators(const PermModule& mod, std::vector<PolyFp> gens) {
  PolyFp g{mod.base().torsion_moduli().empty() ? 2 : mod.base().torsion_moduli()[0], {}};
  for (auto& x : gens) {
    x.p = g.p;
    g = poly_gcd(g, normalize_laurent_generator(std::move(x)));
  }
  return laurent(mod, std::move(g));
}

Submodule Submodule::laurent_zero(const PermModule& mod) { return laurent(mod, PolyFp{2, {}}); }

Submodule Submodule::pullback(FactorMap f, WindowLattice target_lattice) {
  if (!f.target().xset().is_finite())
    throw UnsupportedError("pullback submodule requires a finite factor target");
  if (!(target_lattice.module() == f.target()))
    throw std::invalid_argument("pullback lattice lives over the wrong module");
  if (!(target_lattice.window() == f.target().xset().all_points()))
    throw std::invalid_argument("pullback lattice must be windowed over all of the target");
  Submodule s;
  s.kind_ = Kind::Pullback;
  s.mod_ = f.source();
  s.fmap_ = std::move(f);
  s.finite_ = std::move(target_lattice);
  return s;
}

const PermModule& Submodule::module() const { return mod_; }

bool Submodule::contains(const ModuleElement& n) const {
  switch (kind_) {
    case Kind::FiniteX:
      return finite_.contains(n);
    case Kind::LaurentIdeal: {
      if (gen_.is_zero()) return n.is_zero();
      auto [poly, shift] = to_poly(mod_, n);
      (void)shift;
      return poly_divmod(poly, gen_).rem.is_zero();
    }
    case Kind::Pullback:
      return finite_.contains(fmap_.push(n));
  }
  return false;
}

GroupIndex Submodule::index() const {
  switch (kind_) {
    case Kind::FiniteX:
      return finite_.index_in_window();
    case Kind::LaurentIdeal: {
      if (gen_.is_zero()) return GroupIndex::infinite();
      Int idx = 1;
      for (int i = 0; i < gen_.degree(); ++i) idx *= gen_.p;
      return GroupIndex::of(idx);
    }
    case Kind::Pullback:
      return finite_.index_in_window();
  }
  return GroupIndex::infinite();
}

bool Submodule::invariant_under(const AbelianElement& q) const {
  switch (kind_) {
    case Kind::FiniteX: {
      for (const auto& g : finite_.generators())
        if (!finite_.contains(mod_.act(q, g))) return false;
      return true;
    }
    case Kind::LaurentIdeal:
      return true;
    case Kind::Pullback: {
      const auto& target = fmap_.target();
      for (const auto& g : finite_.generators())
        if (!finite_.contains(target.act(q, g))) return false;
      return true;
    }
  }
  return false;
}

ModuleElement Submodule::reduce(const ModuleElement& n) const {
  switch (kind_) {
    case Kind::FiniteX:
      return finite_.reduce(n);
    case Kind::LaurentIdeal: {
      if (gen_.is_zero()) return n;
      PolyFp acc{gen_.p, {}};
      for (const auto& [x, v] : n.support()) {
        PolyFp term = poly_scale(poly_tpow_mod(laurent_exponent(x), gen_), v.coords[0]);
        acc = poly_add(acc, term);
      }
      return from_poly(mod_, acc, 0);
    }
    case Kind::Pullback: {
      ModuleElement rbar = finite_.reduce(fmap_.push(n));
      return fmap_.section(rbar);
    }
  }
  return n;
}

Submodule Submodule::conjugated(const AbelianElement& q) const {
  switch (kind_) {
    case Kind::FiniteX: {
      std::vector<ModuleElement> gens;
      for (const auto& g : finite_.generators()) gens.push_back(mod_.act(q, g));
      return finite_x(WindowLattice::from_elements(mod_, finite_.window(), gens));
    }
    case Kind::LaurentIdeal:
      return *this;
    case Kind::Pullback: {
      const auto& target = fmap_.target();
      std::vector<ModuleElement> gens;
      for (const auto& g : finite_.generators()) gens.push_back(target.act(q, g));
      return pullback(fmap_, WindowLattice::from_elements(target, finite_.window(), gens));
    }
  }
  return *this;
}

WindowLattice Submodule::intersect_window(const std::vector<XPoint>& window) const {
  switch (kind_) {
    case Kind::FiniteX: {
      WindowLattice sub = WindowLattice::zero(mod_, window);
      // Embed B^W into the X coordinates and intersect.
      lat::Mat span;
      std::size_t r = mod_.base().rank();
      const auto& full_window = finite_.window();
      for (const auto& w : sub.window()) {
        auto it = std::lower_bound(full_window.begin(), full_window.end(), w);
        if (it == full_window.end() || !(*it == w))
          throw std::invalid_argument("window point outside X");
        std::size_t slot = static_cast<std::size_t>(it - full_window.begin());
        for (std::size_t i = 0; i < r; ++i) {
          lat::Vec col(finite_.dim(), 0);
          col[slot * r + i] = 1;
          span.push_back(std::move(col));
        }
      }
      lat::Mat inter = lat::intersect(finite_.lattice(), span, finite_.dim());
      // Re-express in W coordinates.
      lat::Mat cols;
      for (const auto& v : inter) {
        lat::Vec w(sub.dim(), 0);
        std::size_t k = 0;
        for (const auto& wp : sub.window()) {
          auto it = std::lower_bound(full_window.begin(), full_window.end(), wp);
          std::size_t slot = static_cast<std::size_t>(it - full_window.begin());
          for (std::size_t i = 0; i < r; ++i) w[k * r + i] = v[slot * r + i];
          ++k;
        }
        cols.push_back(std::move(w));
      }
      return WindowLattice(mod_, sub.window(), std::move(cols));
    }
    case Kind::LaurentIdeal: {
      WindowLattice empty = WindowLattice::zero(mod_, window);
      if (gen_.is_zero()) return empty;
      const auto& w = empty.window();
      if (w.empty()) return empty;
      std::int64_t lo = laurent_exponent(w.front());
      std::int64_t hi = laurent_exponent(w.back());
      if (Int(hi - lo + 1) != Int(w.size()))
        throw UnsupportedError("Laurent window intersection needs a contiguous window");
      std::vector<ModuleElement> shifts;
      for (std::int64_t s = lo; s + gen_.degree() <= hi; ++s)
        shifts.push_back(from_poly(mod_, gen_, s));
      return WindowLattice::from_elements(mod_, w, shifts);
    }
    case Kind::Pullback: {
      WindowLattice sub = WindowLattice::zero(mod_, window);
      std::size_t r = mod_.base().rank();
      const auto& tw = finite_.window();
      lat::Mat push_matrix;
      for (const auto& w : sub.window()) {
        XPoint pw = fmap_.push_point(w);
        auto it = std::lower_bound(tw.begin(), tw.end(), pw);
        assert(it != tw.end() && *it == pw);
        std::size_t slot = static_cast<std::size_t>(it - tw.begin());
        for (std::size_t i = 0; i < r; ++i) {
          lat::Vec col(finite_.dim(), 0);
          col[slot * r + i] = 1;
          push_matrix.push_back(std::move(col));
        }
      }
      lat::Mat pre = lat::preimage(push_matrix, finite_.dim(), finite_.lattice());
      return WindowLattice(mod_, sub.window(), std::move(pre));
    }
  }
  return WindowLattice::zero(mod_, window);
}

namespace {

// Matrix of m |-> m - m^g on the coordinates of B^W (columns convention).
lat::Mat one_minus_action_matrix(const PermModule& mod, const std::vector<XPoint>& window,
                                 const AbelianElement& g) {
  std::size_t r = mod.base().rank();
  std::size_t dim = window.size() * r;
  AbelianElement mg = mod.xset().group().neg(g);
  lat::Mat cols;
  for (std::size_t s = 0; s < window.size(); ++s) {
    XPoint moved = mod.xset().act(mg, window[s]);
    auto it = std::lower_bound(window.begin(), window.end(), moved);
    if (it == window.end() || !(*it == moved))
      throw std::invalid_argument("window not closed under the action");
    std::size_t ms = static_cast<std::size_t>(it - window.begin());
    for (std::size_t i = 0; i < r; ++i) {
      lat::Vec col(dim, 0);
      col[s * r + i] += 1;
      col[ms * r + i] -= 1;
      cols.push_back(std::move(col));
    }
  }
  return cols;
}

}  // namespace

Submodule Submodule::normalizer_in_module(const std::vector<AbelianElement>& qgens) const {
  switch (kind_) {
    case Kind::FiniteX: {
      WindowLattice acc = WindowLattice::full(mod_, finite_.window());
      for (const auto& g : qgens) {
        auto m = one_minus_action_matrix(mod_, finite_.window(), g);
        lat::Mat pre = lat::preimage(m, finite_.dim(), finite_.lattice());
        acc = intersect_window_lattices(acc, WindowLattice(mod_, finite_.window(), std::move(pre)));
      }
      return finite_x(std::move(acc));
    }
    case Kind::LaurentIdeal: {
      PolyFp acc = poly_from(gen_.p, {1});
      for (const auto& g : qgens) {
        std::int64_t s = std::abs(g.coords[0]);
        PolyFp u{gen_.p, {}};
        if (s != 0) {
          std::vector<std::int64_t> c(static_cast<std::size_t>(s) + 1, 0);
          c[0] = 1;
          c.back() = gen_.p - 1;  // 1 - t^s
          u = poly_from(gen_.p, std::move(c));
        }
        acc = ideal_lcm(acc, ideal_quotient(gen_, u));
      }
      return laurent(mod_, std::move(acc));
    }
    case Kind::Pullback: {
      const auto& target = fmap_.target();
      WindowLattice acc = WindowLattice::full(target, finite_.window());
      for (const auto& g : qgens) {
        auto m = one_minus_action_matrix(target, finite_.window(), g);
        lat::Mat pre = lat::preimage(m, finite_.dim(), finite_.lattice());
        acc = intersect_window_lattices(acc, WindowLattice(target, finite_.window(), std::move(pre)));
      }
      return pullback(fmap_, std::move(acc));
    }
  }
  return *this;
}

std::string Submodule::canonical_key() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::FiniteX:
      os << "finite:";
      break;
    case Kind::LaurentIdeal: {
      os << "laurent:" << gen_.p << ":";
      for (auto c : gen_.c) os << c << ",";
      return os.str();
    }
    case Kind::Pullback: {
      os << "pullback:";
      for (const auto& col : fmap_.kernel_subgroup().lattice()) {
        for (const auto& x : col) os << x << ",";
        os << ";";
      }
      os << "|";
      break;
    }
  }
  for (const auto& p : finite_.window()) {
    os << p.orbit << "(";
    for (auto c : p.coset.coords) os << c << ",";
    os << ")";
  }
  os << "|";
  for (const auto& col : finite_.lattice()) {
    for (const auto& x : col) os << x << ",";
    os << ";";
  }
  return os.str();
}

bool Submodule::operator==(const Submodule& o) const {
  if (kind_ != o.kind_ || !(mod_ == o.mod_)) return false;
  switch (kind_) {
    case Kind::FiniteX:
      return finite_ == o.finite_;
    case Kind::LaurentIdeal:
      return gen_.p == o.gen_.p && gen_.c == o.gen_.c;
    case Kind::Pullback:
      return fmap_ == o.fmap_ && finite_ == o.finite_;
  }
  return false;
}

WindowLattice add_scaled_full(const WindowLattice& l, const Int& c) {
  lat::Mat cols = l.lattice();
  for (std::size_t i = 0; i < l.dim(); ++i) {
    lat::Vec e(l.dim(), 0);
    e[i] = c;
    cols.push_back(std::move(e));
  }
  return WindowLattice(l.module(), l.window(), std::move(cols));
}

Submodule separating_subgroup(const Submodule& finite_x, const std::vector<ModuleElement>& probes,
                              const std::vector<AbelianElement>& invariance_gens) {
  if (finite_x.kind() != Submodule::Kind::FiniteX)
    throw UnsupportedError("separating_subgroup operates on FiniteX submodules");
  const WindowLattice& l = finite_x.finite_lattice();
  Int fact = 1;
  for (unsigned j = 1; j < 1000; ++j) {
    fact *= j;
    WindowLattice lj = add_scaled_full(l, fact);
    bool ok = true;
    for (const auto& t : probes) {
      if (lj.contains(t) != l.contains(t)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Submodule out = Submodule::finite_x(std::move(lj));
      for (const auto& g : invariance_gens) {
        if (!out.invariant_under(g))
          throw std::logic_error("separating subgroup lost invariance");
      }
      return out;
    }
  }
  throw std::logic_error("separating_subgroup: factorial schedule did not terminate");
}

std::optional<PolyFp> laurent_equivalent(const Submodule& s) {
  if (s.kind() != Submodule::Kind::Pullback) return std::nullopt;
  const PermModule& mod = s.module();
  if (!is_laurent_module(mod)) return std::nullopt;
  const auto& f = s.factor_map();
  const auto& tlat = s.pullback_lattice();
  std::int64_t p = mod.base().torsion_moduli()[0];

  // The ideal candidate: gcd of the lifted lattice generators and the
  // kernel polynomial t^v - 1.
  PolyFp cand{p, {}};
  for (const auto& g : tlat.generators()) {
    auto [poly, shift] = to_poly(mod, f.section(g));
    (void)shift;
    cand = poly_gcd(cand, poly);
  }
  auto vgens = f.kernel_subgroup().generators();
  if (!vgens.empty()) {
    std::int64_t v = std::abs(vgens[0].coords[0]);
    std::vector<std::int64_t> c(static_cast<std::size_t>(v) + 1, 0);
    c[0] = p - 1;
    c.back() = 1;  // t^v - 1
    cand = poly_gcd(cand, poly_from(p, std::move(c)));
  }
  cand = normalize_laurent_generator(std::move(cand));

  // ideal(cand) is inside the pullback iff the target lattice is invariant
  // under the generator shift and contains the pushed candidate.
  const AbelianElement shift_gen = AbelianElement{{1}};
  Submodule ideal = Submodule::laurent(mod, cand);
  if (!s.invariant_under(shift_gen)) return std::nullopt;
  if (!cand.is_zero() && !s.contains(from_poly(mod, cand, 0))) return std::nullopt;
  if (!(ideal.index() == s.index())) return std::nullopt;
  return cand;
}

}  // namespace wreathlab
