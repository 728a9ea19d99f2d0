#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace koecher {

/// Arithmetic in F_p for p < 2^31.
class Fp {
 public:
  explicit Fp(std::uint32_t p) : p_(p) {}
  std::uint32_t prime() const { return p_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = a + b;
    return r >= p_ ? r - p_ : r;
  }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  /// Symmetric lift to (-p/2, p/2].
  std::int64_t lift(std::uint32_t a) const { return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a; }

 private:
  std::uint32_t p_;
};

using SparseVec = std::vector<std::pair<int, std::uint32_t>>;  // sorted by index, no zeros
using DenseMat = std::vector<std::vector<std::uint32_t>>;

/// Sparse matrix stored by columns.
struct SparseMatrix {
  int rows = 0;
  std::vector<SparseVec> cols;
  int ncols() const { return static_cast<int>(cols.size()); }
};

/// Accumulates coefficient, index pairs and returns a sorted sparse vector.
SparseVec make_sparse(std::vector<std::pair<int, std::int64_t>> entries, const Fp& f);

/// Incremental row echelon over F_p with sparse rows. Rows are reduced against all earlier rows,
/// so reduction sweeps them in insertion order.
class Echelon {
 public:
  Echelon(int ncols, const Fp& f);
  int rank() const { return static_cast<int>(rows_.size()); }
  int ncols() const { return n_; }
  /// Inserts v; returns true if it increased the rank.
  bool insert(const SparseVec& v);
  /// Reduces v in place (dense); coefficient of each row used is written to coeffs if given.
  void reduce(std::vector<std::uint32_t>& v, std::vector<std::uint32_t>* coeffs = nullptr) const;
  const SparseVec& row(int i) const { return rows_[i]; }
  int pivot(int i) const { return pivots_[i]; }

 private:
  int n_;
  Fp f_;
  std::vector<SparseVec> rows_;
  std::vector<int> pivots_;
  std::vector<int> col_count_;
  std::vector<char> is_pivot_;
};

int rank(const SparseMatrix& m, const Fp& f);
/// Basis of the kernel of m (as a map from columns to rows).
std::vector<SparseVec> kernel(const SparseMatrix& m, const Fp& f);
SparseVec apply(const SparseMatrix& m, const SparseVec& v, const Fp& f);

DenseMat identity_matrix(int n);
DenseMat mat_mul(const DenseMat& a, const DenseMat& b, const Fp& f);
DenseMat mat_sub_scalar(DenseMat a, std::uint32_t s, const Fp& f);
/// Row-reduced echelon form in place; returns pivot columns.
std::vector<int> rref(DenseMat& m, const Fp& f);
/// Right null space {x : m x = 0} of a dense matrix with ncols columns.
std::vector<std::vector<std::uint32_t>> null_space(DenseMat m, int ncols, const Fp& f);
/// Characteristic polynomial, coefficients low to high, monic.
std::vector<std::uint32_t> charpoly(const DenseMat& m, const Fp& f);
/// Roots of a polynomial over F_p with multiplicity, by trial for small p.
std::vector<std::uint32_t> poly_roots(const std::vector<std::uint32_t>& poly, const Fp& f);

}  // namespace koecher
