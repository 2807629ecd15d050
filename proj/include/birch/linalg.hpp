#ifndef BIRCH_LINALG_HPP
#define BIRCH_LINALG_HPP

#include <optional>
#include <vector>

#include "birch/field.hpp"

namespace birch {

template <class K>
using Matrix = std::vector<std::vector<K>>;

/// In-place reduced row echelon form; returns pivot columns.
template <FieldScalar K>
std::vector<std::size_t> rref(Matrix<K>& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(a[p][c])) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    K inv = K(K(Rational(1)) / a[r][c]);
    for (auto& x : a[r]) x = K(x * inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      K f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = K(a[i][j] - f * a[r][j]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <FieldScalar K>
std::size_t rank(Matrix<K> a) {
  return rref(a).size();
}

/// Basis of {x : a x = 0}; cols is needed when a has no rows.
template <FieldScalar K>
std::vector<std::vector<K>> nullspace(Matrix<K> a, std::size_t cols) {
  std::vector<std::vector<K>> basis;
  if (a.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<K> e(cols, K(Rational(0)));
      e[j] = K(Rational(1));
      basis.push_back(e);
    }
    return basis;
  }
  auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<K> v(cols, K(Rational(0)));
    v[f] = K(Rational(1));
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = K(-a[i][f]);
    basis.push_back(v);
  }
  return basis;
}

/// Some solution of a x = b, or nullopt when inconsistent.
template <FieldScalar K>
std::optional<std::vector<K>> solve_linear(const Matrix<K>& a, const std::vector<K>& b, std::size_t cols) {
  Matrix<K> aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = rref(aug);
  std::vector<K> x(cols, K(Rational(0)));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == cols) return std::nullopt;
    x[pivots[i]] = aug[i][cols];
  }
  return x;
}

template <FieldScalar K>
Matrix<K> transpose(const Matrix<K>& a, std::size_t cols) {
  Matrix<K> t(cols, std::vector<K>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
  return t;
}

/// Extends linearly independent vectors to a basis of K^n with standard basis vectors.
template <FieldScalar K>
std::vector<std::vector<K>> complete_basis(const std::vector<std::vector<K>>& vs, std::size_t n) {
  std::vector<std::vector<K>> out = vs;
  for (std::size_t j = 0; j < n && out.size() < n; ++j) {
    std::vector<K> e(n, K(Rational(0)));
    e[j] = K(Rational(1));
    out.push_back(e);
    if (rank(out) < out.size()) out.pop_back();
  }
  return out;
}

}  // namespace birch

#endif  // BIRCH_LINALG_HPP
