#include "koecher/modp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace koecher {

std::uint32_t Fp::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t Fp::inv(std::uint32_t a) const {
  if (a % p_ == 0) throw std::domain_error("inverse of zero mod p");
  return pow(a, p_ - 2);
}

SparseVec make_sparse(std::vector<std::pair<int, std::int64_t>> entries, const Fp& f) {
  std::sort(entries.begin(), entries.end());
  SparseVec out;
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    std::uint32_t acc = 0;
    for (; j < entries.size() && entries[j].first == entries[i].first; ++j)
      acc = f.add(acc, f.from_int(entries[j].second));
    if (acc) out.emplace_back(entries[i].first, acc);
    i = j;
  }
  return out;
}

Echelon::Echelon(int ncols, const Fp& f) : n_(ncols), f_(f), col_count_(ncols, 0), is_pivot_(ncols, 0) {}

void Echelon::reduce(std::vector<std::uint32_t>& v, std::vector<std::uint32_t>* coeffs) const {
  if (coeffs) coeffs->assign(rows_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::uint32_t c = v[pivots_[i]];
    if (!c) continue;
    if (coeffs) (*coeffs)[i] = c;
    for (const auto& [j, x] : rows_[i]) v[j] = f_.sub(v[j], f_.mul(c, x));
  }
}

bool Echelon::insert(const SparseVec& sv) {
  std::vector<std::uint32_t> v(n_, 0);
  for (const auto& [j, x] : sv) v[j] = x;
  reduce(v);
  int best = -1;
  for (int j = 0; j < n_; ++j) {
    if (!v[j]) continue;
    if (best < 0 || col_count_[j] < col_count_[best]) best = j;
  }
  if (best < 0) return false;
  std::uint32_t s = f_.inv(v[best]);
  SparseVec row;
  for (int j = 0; j < n_; ++j)
    if (v[j]) {
      row.emplace_back(j, f_.mul(v[j], s));
      ++col_count_[j];
    }
  rows_.push_back(std::move(row));
  pivots_.push_back(best);
  is_pivot_[best] = 1;
  return true;
}

int rank(const SparseMatrix& m, const Fp& f) {
  // Echelonize the shorter side.
  if (m.rows < m.ncols()) {
    Echelon e(m.ncols(), f);
    std::vector<SparseVec> rows(m.rows);
    for (int c = 0; c < m.ncols(); ++c)
      for (const auto& [r, x] : m.cols[c]) rows[r].emplace_back(c, x);
    for (const auto& r : rows) e.insert(r);
    return e.rank();
  }
  Echelon e(m.rows, f);
  for (const auto& c : m.cols) e.insert(c);
  return e.rank();
}

std::vector<SparseVec> kernel(const SparseMatrix& m, const Fp& f) {
  int n = m.ncols();
  DenseMat d(m.rows, std::vector<std::uint32_t>(n, 0));
  for (int c = 0; c < n; ++c)
    for (const auto& [r, x] : m.cols[c]) d[r][c] = x;
  auto ns = null_space(std::move(d), n, f);
  std::vector<SparseVec> out;
  for (const auto& v : ns) {
    SparseVec s;
    for (int j = 0; j < n; ++j)
      if (v[j]) s.emplace_back(j, v[j]);
    out.push_back(std::move(s));
  }
  return out;
}

SparseVec apply(const SparseMatrix& m, const SparseVec& v, const Fp& f) {
  std::vector<std::pair<int, std::int64_t>> acc;
  for (const auto& [c, x] : v)
    for (const auto& [r, y] : m.cols[c]) acc.emplace_back(r, f.mul(x, y));
  return make_sparse(std::move(acc), f);
}

DenseMat identity_matrix(int n) {
  DenseMat m(n, std::vector<std::uint32_t>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

DenseMat mat_mul(const DenseMat& a, const DenseMat& b, const Fp& f) {
  std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  DenseMat c(n, std::vector<std::uint32_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (!a[i][l]) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][l], b[l][j]));
    }
  return c;
}

DenseMat mat_sub_scalar(DenseMat a, std::uint32_t s, const Fp& f) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i][i] = f.sub(a[i][i], s);
  return a;
}

std::vector<int> rref(DenseMat& m, const Fp& f) {
  std::vector<int> piv;
  std::size_t r = 0;
  std::size_t ncols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && !m[p][c]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    std::uint32_t s = f.inv(m[r][c]);
    for (auto& x : m[r]) x = f.mul(x, s);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || !m[i][c]) continue;
      std::uint32_t k = m[i][c];
      for (std::size_t j = c; j < ncols; ++j)
        if (m[r][j]) m[i][j] = f.sub(m[i][j], f.mul(k, m[r][j]));
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  return piv;
}

std::vector<std::vector<std::uint32_t>> null_space(DenseMat m, int ncols, const Fp& f) {
  auto piv = rref(m, f);
  std::vector<char> is_piv(ncols, 0);
  for (int c : piv) is_piv[c] = 1;
  std::vector<std::vector<std::uint32_t>> out;
  for (int free = 0; free < ncols; ++free) {
    if (is_piv[free]) continue;
    std::vector<std::uint32_t> v(ncols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = f.neg(m[r][free]);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::uint32_t> charpoly(const DenseMat& a, const Fp& f) {
  // Hessenberg reduction followed by the standard recurrence.
  int n = static_cast<int>(a.size());
  DenseMat h = a;
  for (int m = 1; m < n - 1; ++m) {
    int i = m;
    while (i < n && !h[i][m - 1]) ++i;
    if (i == n) continue;
    if (i != m) {
      std::swap(h[i], h[m]);
      for (int r = 0; r < n; ++r) std::swap(h[r][i], h[r][m]);
    }
    std::uint32_t inv = f.inv(h[m][m - 1]);
    for (int r = m + 1; r < n; ++r) {
      std::uint32_t u = f.mul(h[r][m - 1], inv);
      if (!u) continue;
      for (int c = 0; c < n; ++c) h[r][c] = f.sub(h[r][c], f.mul(u, h[m][c]));
      for (int c = 0; c < n; ++c) h[c][m] = f.add(h[c][m], f.mul(u, h[c][r]));
    }
  }
  std::vector<std::vector<std::uint32_t>> p(n + 1);
  p[0] = {1};
  for (int k = 1; k <= n; ++k) {
    // p_k = (x - h[k-1][k-1]) p_{k-1} - sum_{i<k-1} h[i][k-1] * prod_{j=i+1}^{k-1} h[j][j-1] * p_i
    std::vector<std::uint32_t> r(k + 1, 0);
    for (int d = 0; d < k; ++d) {
      r[d + 1] = f.add(r[d + 1], p[k - 1][d]);
      r[d] = f.sub(r[d], f.mul(h[k - 1][k - 1], p[k - 1][d]));
    }
    std::uint32_t t = 1;
    for (int i = k - 2; i >= 0; --i) {
      t = f.mul(t, h[i + 1][i]);
      std::uint32_t c = f.mul(t, h[i][k - 1]);
      if (!c) continue;
      for (int d = 0; d <= i; ++d) r[d] = f.sub(r[d], f.mul(c, p[i][d]));
    }
    p[k] = std::move(r);
  }
  return p[n];
}

std::vector<std::uint32_t> poly_roots(const std::vector<std::uint32_t>& poly, const Fp& f) {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> q = poly;
  while (q.size() > 1 && q.back() == 0) q.pop_back();
  for (std::uint32_t x = 0; x < f.prime() && q.size() > 1; ++x) {
    for (;;) {
      // synthetic division by (X - x)
      std::size_t d = q.size() - 1;
      std::vector<std::uint32_t> quo(d, 0);
      std::uint32_t acc = 0;
      for (std::size_t i = d + 1; i-- > 0;) {
        acc = f.add(f.mul(acc, x), q[i]);
        if (i > 0) quo[i - 1] = acc;
      }
      if (acc != 0) break;
      out.push_back(x);
      q = std::move(quo);
      if (q.size() <= 1) break;
    }
  }
  return out;
}

}  // namespace koecher
