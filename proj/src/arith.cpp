#include "koecher/arith.hpp"

#include <algorithm>
#include <map>

namespace koecher {

Int powmod(Int b, Int e, Int m) {
  Int128 r = 1 % m, x = mod_pos(b, m);
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<Int>(r);
}

Int invmod(Int a, Int m) {
  Int g = m, x = 0, x1 = 1, a1 = mod_pos(a, m);
  while (a1) {
    Int q = g / a1;
    Int t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::domain_error("invmod: not invertible");
  return mod_pos(x, m);
}

namespace {

Int mulmod(Int a, Int b, Int m) { return static_cast<Int>(static_cast<Int128>(a) * b % m); }

bool miller_rabin(Int n, Int a) {
  Int d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  Int x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

Int pollard_rho(Int n) {
  if (n % 2 == 0) return 2;
  for (Int c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    auto f = [&](Int v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd_int(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_rec(Int n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Int d = pollard_rho(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

bool is_prime(Int n) {
  if (n < 2) return false;
  for (Int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  for (Int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

std::vector<std::pair<Int, int>> factor_integer(Int n) {
  if (n == 0) throw std::domain_error("factor_integer(0)");
  if (n < 0) n = -n;
  std::map<Int, int> out;
  for (Int p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  factor_rec(n, out);
  return {out.begin(), out.end()};
}

}  // namespace koecher
