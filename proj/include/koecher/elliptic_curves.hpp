#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "koecher/ideal.hpp"
#include "koecher/number_field.hpp"

namespace koecher {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integral coefficients.
struct Curve {
  std::array<OElt, 5> a;  // a1, a2, a3, a4, a6

  const OElt& a1() const { return a[0]; }
  const OElt& a2() const { return a[1]; }
  const OElt& a3() const { return a[2]; }
  const OElt& a4() const { return a[3]; }
  const OElt& a6() const { return a[4]; }

  struct Invariants {
    OElt b2, b4, b6, b8, c4, c6, disc;
  };
  Invariants invariants() const;
  OElt discriminant() const { return invariants().disc; }
  /// j = c4^3 / disc; throws on a singular curve.
  FElt j_invariant() const;

  /// x = x' + r, y = y' + s x' + w.
  Curve rsw(const OElt& r, const OElt& s, const OElt& w) const;
  /// Model with a_i replaced by a_i / u^i; throws unless exact.
  Curve scale_down(const OElt& u) const;

  std::string str() const;
  static Curve parse(const std::string& s);  // "[a1, a2, a3, a4, a6]"
  friend bool operator==(const Curve&, const Curve&) = default;
  friend auto operator<=>(const Curve& x, const Curve& y) { return x.a <=> y.a; }
};

struct LocalData {
  PrimeIdeal prime;
  int conductor_exponent = 0;
  int disc_valuation = 0;  // of a minimal model
  std::string kodaira;
  Curve minimal;  // a model minimal at the prime
};

/// Local data at P: Tate's algorithm above 2 and 3, the valuations of c4, c6, disc elsewhere.
LocalData tate(const Curve& e, const PrimeIdeal& P);
/// Tate's algorithm run at any prime; coefficients grow with the residue characteristic.
LocalData tate_loop(const Curve& e, const PrimeIdeal& P);

struct ConductorData {
  Ideal conductor;
  std::vector<LocalData> local;  // primes dividing the discriminant of the given model
  Int norm() const { return conductor.norm(); }
  OElt generator() const { return conductor.generator(); }
};
ConductorData conductor(const Curve& e);

/// (u, r, s, w) over F carrying e1 to e2: a_i(e2) are the transformed a_i(e1).
struct Isomorphism {
  FElt u, r, s, w;
};
std::optional<Isomorphism> isomorphic(const Curve& e1, const Curve& e2);

/// Some y in O with y^n = x, if one exists.
std::optional<OElt> integral_root(const OElt& x, int n);

/// Projective points over O/P on a model with good reduction at P; throws at bad primes.
Int count_points(const Curve& e, const PrimeIdeal& P);
/// N(P) + 1 - #E(O/P).
Int trace_of_frobenius(const Curve& e, const PrimeIdeal& P);

struct SearchParams {
  int box = 2;
  Int disc_bound = 10000000;
  Int conductor_bound = 20000;
  int jobs = 1;
};

struct FoundCurve {
  Curve curve;
  Int disc_norm;  // |N(disc)|
  Ideal conductor;
};

struct CurveClass {
  Curve representative;  // smallest member in the coefficient order
  Ideal conductor;
  FElt j;
  std::size_t members = 0;
};

struct SearchResult {
  std::size_t tuples = 0;       // coefficient tuples examined
  std::size_t disc_passed = 0;  // nonsingular with |N(disc)| within the bound
  std::vector<FoundCurve> curves;
  std::vector<CurveClass> classes;  // sorted by conductor norm, then conductor, then representative
};

/// Every a1..a6 in the box {c0 + c1 t + c2 t^2 : |c_i| <= box}, filtered by discriminant norm and conductor norm,
/// grouped into isomorphism classes over F.
SearchResult search_box(const SearchParams& params);
/// Groups curves into F-isomorphism classes.
std::vector<CurveClass> isomorphism_classes(const std::vector<FoundCurve>& curves);

}  // namespace koecher
