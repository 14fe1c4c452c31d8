#pragma once

// Dense exact linear algebra over Scalar, plus Fourier-Motzkin elimination for
// strict homogeneous systems.

#include <cstddef>
#include <optional>
#include <vector>

#include "coxmin/scalar.hpp"

namespace coxmin {

using Vec = std::vector<Scalar>;
using Mat = std::vector<Vec>;  // row-major

inline Mat zero_matrix(std::size_t rows, std::size_t cols) { return Mat(rows, Vec(cols)); }

inline Mat identity_matrix(std::size_t n) {
  Mat m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Scalar(1);
  return m;
}

inline Scalar dot(const Vec& a, const Vec& b) {
  Scalar s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline Vec mat_vec(const Mat& m, const Vec& v) {
  Vec r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat r = zero_matrix(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[t][j].is_zero()) r[i][j] += a[i][t] * b[t][j];
    }
  return r;
}

inline Mat transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat r = zero_matrix(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
  return r;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline Vec vec_scale(const Vec& a, const Scalar& s) {
  Vec r(a);
  for (auto& x : r) x = x * s;
  return r;
}

inline bool is_zero_vec(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Scalar inv = m[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Scalar f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
inline std::vector<Vec> kernel(Mat m, std::size_t cols) {
  std::vector<Vec> basis;
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols);
    v[f] = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<Vec> kernel(const Mat& m) { return kernel(m, m.empty() ? 0 : m[0].size()); }

/// Solution of m x = b, if any.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  Mat aug = m;
  for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  Vec x(cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

inline Mat inverse(const Mat& m) {
  const std::size_t n = m.size();
  Mat aug = m;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n);
    aug[i][n + i] = Scalar(1);
  }
  const auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) fail(ErrorKind::InvalidInput, "singular matrix");
  Mat r = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = aug[i][n + j];
  return r;
}

/// Coordinates: basis vectors as columns, so result = sum_j t_j basis[j].
inline Vec combine(const std::vector<Vec>& basis, const Vec& t, std::size_t dim) {
  Vec r(dim);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (t[j].is_zero()) continue;
    for (std::size_t i = 0; i < dim; ++i)
      if (!basis[j][i].is_zero()) r[i] += t[j] * basis[j][i];
  }
  return r;
}

/// Sum of subspaces as a basis (rows of the rref of the stacked generators).
inline std::vector<Vec> span_basis(const std::vector<Vec>& gens, std::size_t dim) {
  if (gens.empty()) return {};
  Mat m = gens;
  const auto pivots = rref(m);
  m.resize(pivots.size());
  (void)dim;
  return m;
}

/// Finds t with row . t > 0 for every row, or nothing if the open cone is
/// empty. Plain Fourier-Motzkin: eliminate the last variable, recurse, then
/// back-substitute the variable strictly inside its bounds.
inline std::optional<Vec> strict_feasible(const std::vector<Vec>& rows, std::size_t vars) {
  if (vars == 0) {
    // rows are all "0 > 0"
    if (!rows.empty()) return std::nullopt;
    return Vec{};
  }
  for (const auto& r : rows)
    if (is_zero_vec(r)) return std::nullopt;
  const std::size_t k = vars - 1;
  std::vector<Vec> pos, neg, rest;
  for (const auto& r : rows) {
    const int s = r[k].sign();
    if (s > 0) pos.push_back(r);
    else if (s < 0) neg.push_back(r);
    else rest.push_back(Vec(r.begin(), r.begin() + static_cast<long>(k)));
  }
  // For p in pos, q in neg: t_k > -(p'.t)/p_k and t_k < (q'.t)/(-q_k);
  // combining gives (q_k' / -q_k + p'/p_k) . t > 0 after scaling.
  std::vector<Vec> reduced = rest;
  for (const auto& p : pos)
    for (const auto& q : neg) {
      Vec r(k);
      const Scalar a = -q[k], b = p[k];
      for (std::size_t j = 0; j < k; ++j) r[j] = a * p[j] + b * q[j];
      reduced.push_back(std::move(r));
    }
  // Drop exact duplicates to keep the elimination small.
  {
    std::vector<Vec> uniq;
    std::vector<std::string> keys;
    for (auto& r : reduced) {
      // normalise by the first nonzero entry's absolute value
      std::size_t f = 0;
      while (f < r.size() && r[f].is_zero()) ++f;
      Vec n = r;
      if (f < r.size()) {
        Scalar s = r[f].sign() > 0 ? r[f] : -r[f];
        const Scalar inv = s.inverse();
        for (auto& x : n) x = x * inv;
      }
      std::string key;
      for (const auto& x : n) key += x.key() + "|";
      bool dup = false;
      for (const auto& kk : keys)
        if (kk == key) { dup = true; break; }
      if (!dup) {
        keys.push_back(key);
        uniq.push_back(std::move(n));
      }
    }
    reduced = std::move(uniq);
  }
  auto sub = strict_feasible(reduced, k);
  if (!sub) return std::nullopt;
  Vec t = *sub;
  // bounds on t_k
  std::optional<Scalar> lower, upper;
  for (const auto& p : pos) {
    Scalar partial;
    for (std::size_t j = 0; j < k; ++j) partial += p[j] * t[j];
    const Scalar bound = -partial / p[k];
    if (!lower || bound > *lower) lower = bound;
  }
  for (const auto& q : neg) {
    Scalar partial;
    for (std::size_t j = 0; j < k; ++j) partial += q[j] * t[j];
    const Scalar bound = -partial / q[k];
    if (!upper || bound < *upper) upper = bound;
  }
  Scalar tk;
  if (lower && upper) tk = (*lower + *upper) * Scalar(mpq_class(1, 2));
  else if (lower) tk = *lower + Scalar(1);
  else if (upper) tk = *upper - Scalar(1);
  t.push_back(tk);
  return t;
}

}  // namespace coxmin
