#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "koecher/cone_geometry.hpp"
#include "koecher/ideal.hpp"
#include "koecher/modp.hpp"
#include "koecher/perfect_forms.hpp"

namespace koecher {

constexpr std::uint32_t kFieldPrime = 12379;
constexpr std::uint32_t kSanityPrime = 12289;

struct UnknownType : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A level n together with the projective line P^1(O/n), whose points label Gamma_0(n) \ GL2(O)
/// through the bottom row.
class LevelIdeal {
 public:
  explicit LevelIdeal(const Ideal& n);
  static LevelIdeal from_generator(const OElt& g) { return LevelIdeal(Ideal::principal(g)); }

  const Ideal& ideal() const { return n_; }
  Int norm() const { return n_.norm(); }
  /// Canonical generator.
  OElt generator() const { return n_.generator(); }
  const std::vector<std::pair<PrimeIdeal, int>>& factorization() const { return factors_; }
  /// "1", "p", "p^2", "pq", "p^3", "pq^2", "pqr", ... (exponents sorted ascending).
  std::string type() const;
  bool divides_level(const PrimeIdeal& P) const;

  int p1_size() const { return static_cast<int>(points_.size()); }
  /// Label of (a : b); throws std::domain_error if (a, b) + n != O.
  int p1_label(const OElt& a, const OElt& b) const;
  bool coprime(const OElt& a, const OElt& b) const;
  /// The representative residues of a label.
  std::pair<OElt, OElt> p1_point(int label) const;
  /// (a : b) * h.
  int act(int label, const Mat2& h) const;
  /// The coset Gamma_0(n) g.
  int label_of(const Mat2& g) const { return p1_label(g.c, g.d); }
  /// Some g in GL2(O) with label_of(g) == label.
  Mat2 lift(int label) const;

 private:
  Int index(const OElt& a, const OElt& b) const;
  Ideal n_;
  std::vector<std::pair<PrimeIdeal, int>> factors_;
  std::vector<int> table_;                  // pair index -> label or -1
  std::vector<std::pair<OElt, OElt>> points_;
  mutable std::vector<Mat2> lifts_;
  mutable std::vector<char> lifted_;
};

/// |P^1(O/n)| from the product formula.
Int p1_size_formula(const Ideal& n);

/// Table value of the Eisenstein dimension by factorization type; throws UnknownType otherwise.
int eisenstein_dimension(const LevelIdeal& n);

struct Cell {
  int rep;    // index into the fan's cones of this dimension
  int label;  // P^1 label of the coset
};

struct CellRef {
  int index = -1;  // -1: the cell vanishes (orientation-reversing stabilizer)
  int sign = 0;
};

/// Interior Koecher cells of dimensions 2, 3, 4 modulo Gamma_0(n).
class QuotientComplex {
 public:
  QuotientComplex(const FanDatabase& fan, const LevelIdeal& level);

  const FanDatabase& fan() const { return *fan_; }
  const LevelIdeal& level() const { return *level_; }
  const std::vector<Cell>& cells(int k) const { return cells_.at(k); }
  /// [label, rep] = sign * cells(k)[index].
  CellRef find(int k, int rep, int label) const;
  /// Boundary from dimension k to k-1 (k = 3 or 4), columns indexed by cells(k).
  SparseMatrix boundary(int k, const Fp& f) const;

 private:
  const FanDatabase* fan_;
  const LevelIdeal* level_;
  std::array<std::vector<Cell>, 5> cells_;
  std::array<std::vector<std::vector<CellRef>>, 5> refs_;  // [k][rep][label]
};

/// H4 = ker(boundary 3) / im(boundary 4) with a basis of kernel vectors.
class Homology {
 public:
  Homology(const QuotientComplex& complex, std::uint32_t prime);
  const Fp& field() const { return f_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int cycles_dim() const { return cycles_dim_; }
  int boundaries_dim() const { return boundaries_dim_; }
  const std::vector<SparseVec>& basis() const { return basis_; }
  /// Coordinates of a cycle in the basis; throws std::domain_error if v is not a cycle.
  std::vector<std::uint32_t> coordinates(const SparseVec& v) const;

 private:
  Fp f_;
  int cycles_dim_ = 0;
  int boundaries_dim_ = 0;
  Echelon echelon_;
  std::vector<SparseVec> basis_;
  DenseMat to_basis_;
  std::vector<std::uint32_t> raw_coordinates(const SparseVec& v) const;
};

}  // namespace koecher
