#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "koecher/number_field.hpp"

namespace koecher {

/// Integral ideal of O, stored as an upper triangular row HNF in the basis (1, t, t^2).
class Ideal {
 public:
  using Hnf = std::array<std::array<Int, 3>, 3>;

  Ideal() : Ideal(unit()) {}
  static Ideal unit();
  static Ideal principal(const OElt& g);
  static Ideal from_generators(const std::vector<OElt>& gens);
  static Ideal from_hnf(const Hnf& h);

  const Hnf& hnf() const { return h_; }
  /// Throws OverflowError beyond 64 bits.
  Int norm() const { return mul_ck(mul_ck(h_[0][0], h_[1][1]), h_[2][2]); }
  Int128 wide_norm() const { return static_cast<Int128>(h_[0][0]) * h_[1][1] * h_[2][2]; }
  bool is_unit() const { return norm() == 1; }
  std::array<OElt, 3> basis() const;

  bool contains(const OElt& x) const { return reduce(x).is_zero(); }
  /// Canonical representative of x mod the ideal: 0 <= c_i < h_ii.
  OElt reduce(const OElt& x) const;
  /// Index of a canonical residue in [0, norm).
  Int residue_index(const OElt& r) const { return r[0] + h_[0][0] * (r[1] + h_[1][1] * r[2]); }
  OElt residue_from_index(Int idx) const;

  /// this | other, i.e. other is contained in this.
  bool divides(const Ideal& other) const;
  Ideal operator*(const Ideal& o) const;
  Ideal operator+(const Ideal& o) const;
  Ideal intersect(const Ideal& o) const;
  /// Exact quotient by a principal ideal (g); requires g | this.
  Ideal divide_by(const OElt& g) const;

  /// Deterministic generator depending only on the ideal.
  OElt generator() const;

  friend bool operator==(const Ideal& a, const Ideal& b) { return a.h_ == b.h_; }
  friend bool operator<(const Ideal& a, const Ideal& b) {
    if (a.wide_norm() != b.wide_norm()) return a.wide_norm() < b.wide_norm();
    return a.h_ < b.h_;
  }
  std::string str() const;

 private:
  explicit Ideal(const Hnf& h) : h_(h) {}
  Hnf h_{};
};

/// The canonical element among +-eps^k g.
OElt canonical_associate(const OElt& g);

struct PrimeIdeal {
  Int p = 0;          // residue characteristic
  int degree = 0;     // residue degree f
  int ram = 1;        // ramification index e
  Ideal ideal;
  OElt gen;           // canonical generator
  std::vector<Int> poly;  // monic factor of x^3 - x^2 + 1 mod p, low degree first

  Int norm() const;
  friend bool operator==(const PrimeIdeal& a, const PrimeIdeal& b) { return a.ideal == b.ideal; }
  friend bool operator<(const PrimeIdeal& a, const PrimeIdeal& b) { return a.ideal < b.ideal; }
};

/// Primes above p with their ramification indices; sum e_i f_i = 3.
std::vector<PrimeIdeal> factor_rational_prime(Int p);
/// Prime factorization of a nonzero ideal.
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Ideal& a);
/// v_P(x) for nonzero integral x.
int valuation(const OElt& x, const PrimeIdeal& P);
int valuation(const Ideal& a, const PrimeIdeal& P);
/// All prime ideals of norm <= bound, sorted by norm then HNF.
std::vector<PrimeIdeal> primes_up_to(Int bound);
/// All nonzero integral ideals of norm <= bound, sorted.
std::vector<Ideal> ideals_up_to(Int bound);

/// O/P as polynomials of degree < f over Z/p.
class ResidueField {
 public:
  using Elem = std::array<Int, 3>;
  explicit ResidueField(const PrimeIdeal& P);

  Int characteristic() const { return p_; }
  int degree() const { return f_; }
  Int size() const { return q_; }

  Elem reduce(const OElt& x) const;
  OElt lift(const Elem& a) const { return {a[0], a[1], a[2]}; }
  Elem from_int(Int a) const { return {mod_pos(a, p_), 0, 0}; }
  Elem element(Int idx) const;
  Int index(const Elem& a) const { return a[0] + p_ * (a[1] + p_ * a[2]); }

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem a, Int e) const;
  Elem inv(const Elem& a) const;
  static bool is_zero(const Elem& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }
  bool is_square(const Elem& a) const;
  /// Square root when p = 2 (always exists); otherwise by search over the field.
  Elem sqrt(const Elem& a) const;
  /// Cube root when p = 3.
  Elem cbrt(const Elem& a) const;

 private:
  Int p_;
  int f_;
  Int q_;
  std::array<Int, 3> g_{};  // x^f = -(g0 + g1 x + ... )
  Int root_ = 0;            // for f = 1
};

}  // namespace koecher
