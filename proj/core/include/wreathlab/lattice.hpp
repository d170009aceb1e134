#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wreathlab/numeric.hpp"

namespace wreathlab::lat {

using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;  // list of columns, all of the same length

/// Canonical column-style Hermite normal form. Pivot entries are positive,
/// entries left of a pivot in its row lie in [0, pivot), zero columns are
/// dropped. Equal lattices produce identical matrices.
Mat hermite(Mat cols, std::size_t rows);

/// Hermite form together with the unimodular column transform: H = A * U.
Mat hermite_with_transform(Mat cols, std::size_t rows, Mat& transform);

/// Coefficients y with H*y == v, for H in canonical Hermite form.
std::optional<Vec> solve(const Mat& h, Vec v);

bool contains(const Mat& h, const Vec& v);

/// Canonical representative of v + lattice(h).
Vec residue(const Mat& h, Vec v);

/// Basis of the integer kernel of the matrix (columns of `a` are the images
/// of the standard basis vectors of Z^{a.size()}).
Mat kernel(const Mat& a, std::size_t rows);

Mat sum(const Mat& a, const Mat& b, std::size_t rows);

Mat intersect(const Mat& a, const Mat& b, std::size_t rows);

/// {v in Z^n : M v in lattice(target)} where the i-th column of `m` is the
/// image of e_i; n = m.size().
Mat preimage(const Mat& m, std::size_t out_rows, const Mat& target);

/// Full-rank check plus |det|; nullopt when rank < rows.
std::optional<Int> index_in_ambient(const Mat& h, std::size_t rows);

bool equal_lattices(const Mat& canonical_a, const Mat& canonical_b);

/// True if lattice(sub) is contained in lattice(sup); `sup` canonical.
bool contains_lattice(const Mat& sup, const Mat& sub);

/// Smith-style splitting data for a lattice A in Z^rows: a row basis P of
/// Z^rows (columns of `basis`) such that the first `rank` columns span the
/// saturation of A and the rest a complementary summand.
struct Saturation {
  Mat basis;         // unimodular, columns form a basis of Z^rows
  std::size_t rank;  // rank of the input lattice
  Vec diag;          // the diagonal entries of the reduced form, size = rank
};
Saturation saturate(const Mat& a, std::size_t rows);

/// Inverse of a unimodular square matrix (columns convention).
Mat unimodular_inverse(const Mat& p);

Mat scale(const Mat& a, const Int& c);

Vec mat_apply(const Mat& m, const Vec& v);  // m * v, columns convention

}  // namespace wreathlab::lat
