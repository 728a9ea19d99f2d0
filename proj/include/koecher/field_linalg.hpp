#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace koecher {

/// Gaussian elimination over an exact field type T (needs is_zero, +, -, *, /).
template <class T>
struct Echelon {
  std::vector<std::vector<T>> rows;  // reduced, leading entry 1
  std::vector<std::size_t> pivots;
};

template <class T>
Echelon<T> row_reduce(std::vector<std::vector<T>> m) {
  Echelon<T> e;
  if (m.empty()) return e;
  std::size_t ncols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    T inv = T(1) / m[r][c];
    for (std::size_t j = c; j < ncols; ++j) m[r][j] = m[r][j] * inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      T f = m[i][c];
      for (std::size_t j = c; j < ncols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

template <class T>
std::size_t rank_of(const std::vector<std::vector<T>>& m) {
  return row_reduce(m).pivots.size();
}

/// Basis of {x : m x = 0}.
template <class T>
std::vector<std::vector<T>> kernel_of(const std::vector<std::vector<T>>& m, std::size_t ncols) {
  Echelon<T> e = row_reduce(m);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<T>> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(ncols, T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = T(0) - e.rows[i][f];
    out.push_back(std::move(v));
  }
  return out;
}

template <class T>
T determinant(std::vector<std::vector<T>> m) {
  std::size_t n = m.size();
  T det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) return T(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = T(0) - det;
    }
    det = det * m[c][c];
    T inv = T(1) / m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      T f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
    }
  }
  return det;
}

/// Some x with sum_i x_i cols[i] = target, if one exists.
template <class T>
bool solve_combination(const std::vector<std::vector<T>>& cols, const std::vector<T>& target, std::vector<T>& x) {
  std::size_t n = cols.size(), dim = target.size();
  std::vector<std::vector<T>> aug(dim, std::vector<T>(n + 1, T(0)));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = cols[j][i];
    aug[i][n] = target[i];
  }
  Echelon<T> e = row_reduce(std::move(aug));
  x.assign(n, T(0));
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == n) return false;
    x[e.pivots[i]] = e.rows[i][n];
  }
  return true;
}

}  // namespace koecher
