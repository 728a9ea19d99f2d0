#pragma once

#include <array>
#include <complex>
#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "koecher/arith.hpp"

namespace koecher {

// F = Q(t), t^3 = t^2 - 1.  Real root of x^3 - x^2 + 1 and one complex root.
inline constexpr double kRealRoot = -0.75487766624669276005;
inline constexpr double kComplexRootRe = 0.87743883312334638002;
inline constexpr double kComplexRootIm = 0.74486176661974423659;

/// Integral element c0 + c1 t + c2 t^2 of O = Z[t].
class OElt {
 public:
  constexpr OElt() = default;
  constexpr OElt(Int a0) : c_{a0, 0, 0} {}
  constexpr OElt(Int a0, Int a1, Int a2) : c_{a0, a1, a2} {}

  static constexpr OElt t() { return {0, 1, 0}; }
  /// Fundamental unit -t.
  static constexpr OElt eps() { return {0, -1, 0}; }
  static constexpr OElt eps_inv() { return {0, -1, 1}; }

  Int operator[](int i) const { return c_[i]; }
  Int& operator[](int i) { return c_[i]; }
  const std::array<Int, 3>& coeffs() const { return c_; }

  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
  bool is_one() const { return c_[0] == 1 && c_[1] == 0 && c_[2] == 0; }

  OElt operator-() const { return {sub_ck(0, c_[0]), sub_ck(0, c_[1]), sub_ck(0, c_[2])}; }
  OElt& operator+=(const OElt& o);
  OElt& operator-=(const OElt& o);
  OElt& operator*=(const OElt& o) { return *this = *this * o; }
  friend OElt operator+(OElt a, const OElt& b) { return a += b; }
  friend OElt operator-(OElt a, const OElt& b) { return a -= b; }
  friend OElt operator*(const OElt& a, const OElt& b);
  friend OElt operator*(Int k, const OElt& a) { return {mul_ck(k, a.c_[0]), mul_ck(k, a.c_[1]), mul_ck(k, a.c_[2])}; }

  friend bool operator==(const OElt&, const OElt&) = default;
  friend auto operator<=>(const OElt& a, const OElt& b) { return a.c_ <=> b.c_; }

  Int128 norm() const;
  Int trace() const;
  /// N(x)/x, an integral element.
  OElt adjugate() const;
  /// Exact quotient in O when it exists.
  std::optional<OElt> divide(const OElt& d) const;
  bool divisible_by(Int k) const { return c_[0] % k == 0 && c_[1] % k == 0 && c_[2] % k == 0; }
  OElt div_exact(Int k) const { return {c_[0] / k, c_[1] / k, c_[2] / k}; }
  Int content() const { return gcd_int(gcd_int(c_[0], c_[1]), c_[2]); }
  bool is_unit() const { Int128 n = norm(); return n == 1 || n == -1; }
  OElt pow(int e) const;

  double real() const;
  std::complex<double> cplx() const;
  /// Exact sign of the real embedding.
  int real_sign() const;

  std::string str() const;
  static OElt parse(std::string_view s);

 private:
  std::array<Int, 3> c_{0, 0, 0};
};

/// The element of O whose real and complex embeddings are closest to the given values, coefficientwise rounded;
/// nullopt if a coefficient is out of range.
std::optional<OElt> nearest_integral(double real, std::complex<double> cplx);

/// eps^k for any integer k.
OElt eps_pow(int k);

/// u = sign * eps^k for a unit u.
struct UnitLog {
  int sign;
  int k;
};
UnitLog unit_log(const OElt& u);

/// Element of F with rational coefficients.
class FElt {
 public:
  FElt() = default;
  FElt(long a0) : c_{mpq_class(a0), 0, 0} {}
  FElt(const mpq_class& a0) : c_{a0, 0, 0} {}
  FElt(mpq_class a0, mpq_class a1, mpq_class a2) : c_{std::move(a0), std::move(a1), std::move(a2)} {}
  FElt(const OElt& x) : c_{mpq_class(x[0]), mpq_class(x[1]), mpq_class(x[2])} {}

  const mpq_class& operator[](int i) const { return c_[i]; }
  mpq_class& operator[](int i) { return c_[i]; }

  bool is_zero() const { return sgn(c_[0]) == 0 && sgn(c_[1]) == 0 && sgn(c_[2]) == 0; }
  bool is_integral() const;
  OElt to_oelt() const;  // throws unless integral
  mpz_class denominator() const;

  FElt operator-() const { return {-c_[0], -c_[1], -c_[2]}; }
  FElt& operator+=(const FElt& o);
  FElt& operator-=(const FElt& o);
  FElt& operator*=(const FElt& o) { return *this = *this * o; }
  FElt& operator/=(const FElt& o) { return *this = *this * o.inverse(); }
  friend FElt operator+(FElt a, const FElt& b) { return a += b; }
  friend FElt operator-(FElt a, const FElt& b) { return a -= b; }
  friend FElt operator*(const FElt& a, const FElt& b);
  friend FElt operator/(const FElt& a, const FElt& b) { return a * b.inverse(); }
  friend bool operator==(const FElt& a, const FElt& b) { return a.c_ == b.c_; }

  mpq_class norm() const;
  mpq_class trace() const;
  FElt adjugate() const;
  FElt inverse() const;

  double real() const;
  std::complex<double> cplx() const;
  int real_sign() const;
  int real_compare(const FElt& o) const { return (*this - o).real_sign(); }

  std::string str() const;

 private:
  std::array<mpq_class, 3> c_;
};

/// Sign of c0 + c1 r + c2 r^2 at the real root r, exact.
int real_sign_exact(const mpq_class& c0, const mpq_class& c1, const mpq_class& c2);

struct OEltHash {
  std::size_t operator()(const OElt& x) const {
    std::size_t h = std::hash<Int>()(x[0]);
    h = h * 1000003u ^ std::hash<Int>()(x[1]);
    h = h * 1000003u ^ std::hash<Int>()(x[2]);
    return h;
  }
};

}  // namespace koecher
