#include "wreathlab/lattice.hpp"

#include <algorithm>
#include <cassert>

namespace wreathlab::lat {

namespace {

bool col_is_zero(const Vec& c) {
  for (const auto& x : c)
    if (x != 0) return false;
  return true;
}

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

void axpy(Vec& dst, const Int& c, const Vec& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
}

struct PivotInfo {
  std::size_t row;
  std::size_t col;
};

// In-place column HNF; optionally tracks the transform (H = A * U).
std::vector<PivotInfo> hermite_inplace(Mat& m, std::size_t rows, Mat* u) {
  std::vector<PivotInfo> pivots;
  std::size_t c = 0;
  for (std::size_t row = 0; row < rows && c < m.size(); ++row) {
    while (true) {
      std::size_t best = m.size();
      int count = 0;
      for (std::size_t j = c; j < m.size(); ++j) {
        if (m[j][row] != 0) {
          ++count;
          if (best == m.size() || abs(m[j][row]) < abs(m[best][row])) best = j;
        }
      }
      if (count == 0) break;
      if (count == 1) {
        std::swap(m[c], m[best]);
        if (u) std::swap((*u)[c], (*u)[best]);
        break;
      }
      for (std::size_t j = c; j < m.size(); ++j) {
        if (j == best || m[j][row] == 0) continue;
        Int q = floor_div(m[j][row], m[best][row]);
        if (q != 0) {
          axpy(m[j], -q, m[best]);
          if (u) axpy((*u)[j], -q, (*u)[best]);
        }
        // A truncated-toward-floor quotient can leave a remainder equal in
        // magnitude to the divisor only when signs differ; loop handles it.
      }
    }
    if (c < m.size() && m[c][row] != 0) {
      if (m[c][row] < 0) {
        for (auto& x : m[c]) x = -x;
        if (u)
          for (auto& x : (*u)[c]) x = -x;
      }
      for (std::size_t j = 0; j < c; ++j) {
        Int q = floor_div(m[j][row], m[c][row]);
        if (q != 0) {
          axpy(m[j], -q, m[c]);
          if (u) axpy((*u)[j], -q, (*u)[c]);
        }
      }
      pivots.push_back({row, c});
      ++c;
    }
  }
  return pivots;
}

std::vector<PivotInfo> pivots_of_canonical(const Mat& h, std::size_t rows) {
  std::vector<PivotInfo> pivots;
  std::size_t row = 0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    while (row < rows && h[j][row] == 0) ++row;
    assert(row < rows);
    pivots.push_back({row, j});
    ++row;
  }
  return pivots;
}

}  // namespace

Mat hermite(Mat cols, std::size_t rows) {
#ifndef NDEBUG
  for (const auto& c : cols) assert(c.size() == rows);
#endif
  hermite_inplace(cols, rows, nullptr);
  while (!cols.empty() && col_is_zero(cols.back())) cols.pop_back();
  return cols;
}

Mat hermite_with_transform(Mat cols, std::size_t rows, Mat& transform) {
  std::size_t n = cols.size();
  transform.assign(n, Vec(n, 0));
  for (std::size_t j = 0; j < n; ++j) transform[j][j] = 1;
  hermite_inplace(cols, rows, &transform);
  return cols;  // zero columns kept so the transform stays aligned
}

std::optional<Vec> solve(const Mat& h, Vec v) {
  auto pivots = pivots_of_canonical(h, v.size());
  Vec y(h.size(), 0);
  for (const auto& p : pivots) {
    const Int& pivot = h[p.col][p.row];
    if (v[p.row] % pivot != 0) return std::nullopt;
    Int q = v[p.row] / pivot;
    if (q != 0) axpy(v, -q, h[p.col]);
    y[p.col] = q;
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return y;
}

bool contains(const Mat& h, const Vec& v) {
  Vec copy = v;
  return solve(h, std::move(copy)).has_value();
}

Vec residue(const Mat& h, Vec v) {
  auto pivots = pivots_of_canonical(h, v.size());
  for (const auto& p : pivots) {
    Int q = floor_div(v[p.row], h[p.col][p.row]);
    if (q != 0) axpy(v, -q, h[p.col]);
  }
  return v;
}

Mat kernel(const Mat& a, std::size_t rows) {
  Mat u;
  Mat h = hermite_with_transform(a, rows, u);
  Mat basis;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (col_is_zero(h[j])) basis.push_back(u[j]);
  }
  return hermite(std::move(basis), a.size());
}

Mat sum(const Mat& a, const Mat& b, std::size_t rows) {
  Mat cols = a;
  cols.insert(cols.end(), b.begin(), b.end());
  return hermite(std::move(cols), rows);
}

Mat intersect(const Mat& a, const Mat& b, std::size_t rows) {
  // Kernel of [a | -b]; the a-part coefficients span the intersection.
  Mat stacked = a;
  for (const auto& col : b) {
    Vec neg(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) neg[i] = -col[i];
    stacked.push_back(std::move(neg));
  }
  Mat ker = kernel(stacked, rows);
  Mat result;
  for (const auto& k : ker) {
    Vec v(rows, 0);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (k[j] != 0) axpy(v, k[j], a[j]);
    result.push_back(std::move(v));
  }
  return hermite(std::move(result), rows);
}

Mat preimage(const Mat& m, std::size_t out_rows, const Mat& target) {
  std::size_t n = m.size();
  Mat stacked = m;
  for (const auto& col : target) {
    Vec neg(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) neg[i] = -col[i];
    stacked.push_back(std::move(neg));
  }
  Mat ker = kernel(stacked, out_rows);
  Mat result;
  for (const auto& k : ker) {
    Vec v(k.begin(), k.begin() + n);
    result.push_back(std::move(v));
  }
  return hermite(std::move(result), n);
}

std::optional<Int> index_in_ambient(const Mat& h, std::size_t rows) {
  if (h.size() != rows) return std::nullopt;
  auto pivots = pivots_of_canonical(h, rows);
  if (pivots.size() != rows) return std::nullopt;
  Int det = 1;
  for (const auto& p : pivots) det *= h[p.col][p.row];
  return det;
}

bool equal_lattices(const Mat& a, const Mat& b) { return a == b; }

bool contains_lattice(const Mat& sup, const Mat& sub) {
  for (const auto& col : sub)
    if (!contains(sup, col)) return false;
  return true;
}

Saturation saturate(const Mat& a, std::size_t rows) {
  // Diagonalize: R * A * C = D with R, C unimodular. Then A*C = R^{-1}*D, so
  // the j-th diagonal entry d_j satisfies (A*C)_j = d_j * (R^{-1})_j. The
  // first rank(A) columns of R^{-1} therefore span sat(A), and R^{-1} is a
  // basis of Z^rows whose tail complements it.
  Mat m = a;  // working copy, columns
  std::size_t cols = m.size();
  Mat rinv(rows, Vec(rows, 0));  // columns of R^{-1}
  for (std::size_t i = 0; i < rows; ++i) rinv[i][i] = 1;

  auto row_add = [&](std::size_t dst, std::size_t src, const Int& c) {
    // row_dst += c * row_src  =>  rinv col_src -= c * rinv col_dst
    for (std::size_t j = 0; j < cols; ++j) m[j][dst] += c * m[j][src];
    axpy(rinv[src], -c, rinv[dst]);
  };
  auto row_swap = [&](std::size_t i1, std::size_t i2) {
    for (std::size_t j = 0; j < cols; ++j) std::swap(m[j][i1], m[j][i2]);
    std::swap(rinv[i1], rinv[i2]);
  };
  auto row_negate = [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) m[j][i] = -m[j][i];
    for (auto& x : rinv[i]) x = -x;
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Int& c) { axpy(m[dst], c, m[src]); };
  auto col_swap = [&](std::size_t j1, std::size_t j2) { std::swap(m[j1], m[j2]); };

  std::size_t k = 0;
  while (k < rows && k < cols) {
    // Find a pivot in the trailing submatrix.
    std::size_t pr = rows, pc = cols;
    for (std::size_t j = k; j < cols && pc == cols; ++j)
      for (std::size_t i = k; i < rows; ++i)
        if (m[j][i] != 0) {
          pr = i;
          pc = j;
          break;
        }
    if (pc == cols) break;
    if (pr != k) row_swap(pr, k);
    if (pc != k) col_swap(pc, k);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (m[k][i] != 0) {
          Int q = floor_div(m[k][i], m[k][k]);
          row_add(i, k, -q);
          if (m[k][i] != 0) {
            row_swap(i, k);
            clean = false;
          }
        }
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (m[j][k] != 0) {
          Int q = floor_div(m[j][k], m[k][k]);
          col_add(j, k, -q);
          if (m[j][k] != 0) {
            col_swap(j, k);
            clean = false;
          }
        }
      }
    }
    if (m[k][k] < 0) row_negate(k);
    ++k;
  }

  Saturation out;
  out.rank = k;
  out.basis = std::move(rinv);
  for (std::size_t j = 0; j < k; ++j) out.diag.push_back(m[j][j]);
  return out;
}

Mat unimodular_inverse(const Mat& p) {
  // The canonical Hermite form of a unimodular matrix is the identity, so
  // the tracked transform is exactly the inverse.
  Mat u;
  Mat h = hermite_with_transform(p, p.size(), u);
  for (std::size_t j = 0; j < h.size(); ++j)
    for (std::size_t i = 0; i < h[j].size(); ++i)
      if (h[j][i] != Int(i == j ? 1 : 0))
        throw std::invalid_argument("unimodular_inverse: matrix is not unimodular");
  return u;
}

Mat scale(const Mat& a, const Int& c) {
  Mat r = a;
  for (auto& col : r)
    for (auto& x : col) x *= c;
  return r;
}

Vec mat_apply(const Mat& m, const Vec& v) {
  assert(m.size() == v.size());
  std::size_t rows = m.empty() ? 0 : m[0].size();
  Vec out(rows, 0);
  for (std::size_t j = 0; j < m.size(); ++j)
    if (v[j] != 0) axpy(out, v[j], m[j]);
  return out;
}

}  // namespace wreathlab::lat
