#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace koecher {

using Int = std::int64_t;
using Int128 = __int128;

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

inline Int add_ck(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 add overflow");
  return r;
}
inline Int sub_ck(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 sub overflow");
  return r;
}
inline Int mul_ck(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 mul overflow");
  return r;
}
inline Int narrow(Int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("int128 narrowing overflow");
  return static_cast<Int>(v);
}
inline Int narrow(const mpz_class& v) {
  if (!v.fits_slong_p()) throw OverflowError("mpz narrowing overflow");
  return v.get_si();
}

inline mpz_class to_mpz(Int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class hi = static_cast<unsigned long>(u >> 64);
  mpz_class lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

inline std::string to_string(Int128 v) { return to_mpz(v).get_str(); }

inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline Int mod_pos(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

inline Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int powmod(Int b, Int e, Int m);
Int invmod(Int a, Int m);
bool is_prime(Int n);
// (prime, exponent) pairs, trial division
std::vector<std::pair<Int, int>> factor_integer(Int n);

}  // namespace koecher
