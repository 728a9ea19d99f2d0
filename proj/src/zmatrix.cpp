#include "koecher/zmatrix.hpp"

#include <cmath>
#include <stdexcept>

namespace koecher {

namespace {

void row_sub(std::vector<mpz_class>& a, const std::vector<mpz_class>& b, const mpz_class& q) {
  if (q == 0) return;
  for (std::size_t k = 0; k < a.size(); ++k) a[k] -= q * b[k];
}

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

ZMat hermite_form(const ZMat& a, ZMat* transform) {
  ZMat m = a;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  ZMat u;
  if (transform) {
    u.assign(rows, std::vector<mpz_class>(rows, 0));
    for (std::size_t i = 0; i < rows; ++i) u[i][i] = 1;
  }
  std::size_t r = 0;
  for (std::size_t j = 0; j < cols && r < rows; ++j) {
    for (;;) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i) {
        if (m[i][j] == 0) continue;
        if (best == rows || abs(m[i][j]) < abs(m[best][j])) best = i;
      }
      if (best == rows) break;
      if (best != r) {
        std::swap(m[best], m[r]);
        if (transform) std::swap(u[best], u[r]);
      }
      bool done = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (m[i][j] == 0) continue;
        mpz_class q = fdiv(m[i][j], m[r][j]);
        row_sub(m[i], m[r], q);
        if (transform) row_sub(u[i], u[r], q);
        if (m[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (r >= rows || m[r][j] == 0) continue;
    if (m[r][j] < 0) {
      for (auto& v : m[r]) v = -v;
      if (transform)
        for (auto& v : u[r]) v = -v;
    }
    for (std::size_t i = 0; i < r; ++i) {
      mpz_class q = fdiv(m[i][j], m[r][j]);
      row_sub(m[i], m[r], q);
      if (transform) row_sub(u[i], u[r], q);
    }
    ++r;
  }
  if (transform) *transform = std::move(u);
  m.resize(r);
  return m;
}

std::vector<std::vector<mpz_class>> lll_reduce(std::vector<std::vector<mpz_class>> b,
                                               const std::vector<std::vector<double>>& gram) {
  const std::size_t n = b.size();
  if (n == 0) return b;
  const std::size_t d = b[0].size();
  auto inner = [&](std::size_t i, std::size_t j) {
    double s = 0;
    for (std::size_t k = 0; k < d; ++k) {
      double bk = b[i][k].get_d();
      if (bk == 0) continue;
      for (std::size_t l = 0; l < d; ++l) s += bk * gram[k][l] * b[j][l].get_d();
    }
    return s;
  };
  std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0));
  std::vector<double> bstar(n, 0);
  auto gso = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = inner(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * bstar[k];
        mu[i][j] = s / bstar[j];
      }
      double s = inner(i, i);
      for (std::size_t k = 0; k < i; ++k) s -= mu[i][k] * mu[i][k] * bstar[k];
      bstar[i] = s;
    }
  };
  gso();
  std::size_t k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw std::runtime_error("lll_reduce: no convergence");
    for (std::size_t jj = k; jj-- > 0;) {
      double q = std::round(mu[k][jj]);
      if (q != 0) {
        mpz_class qz(q);
        for (std::size_t l = 0; l < d; ++l) b[k][l] -= qz * b[jj][l];
        gso();
      }
    }
    if (bstar[k] >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gso();
      k = k > 1 ? k - 1 : 1;
    }
  }
  return b;
}

}  // namespace koecher
