#pragma once

#include "koecher/elliptic_curves.hpp"

namespace koecher::testing {

/// Affine solutions counted pair by pair, plus the point at infinity.
inline Int brute_force_points(const Curve& e, const PrimeIdeal& P) {
  ResidueField k(P);
  std::array<ResidueField::Elem, 5> a;
  for (int i = 0; i < 5; ++i) a[i] = k.reduce(e.a[i]);
  Int count = 1;
  for (Int i = 0; i < k.size(); ++i)
    for (Int j = 0; j < k.size(); ++j) {
      auto x = k.element(i), y = k.element(j);
      auto lhs = k.add(k.mul(y, y), k.add(k.mul(a[0], k.mul(x, y)), k.mul(a[2], y)));
      auto rhs = k.add(k.mul(x, k.mul(x, x)), k.add(k.mul(a[1], k.mul(x, x)), k.add(k.mul(a[3], x), a[4])));
      count += ResidueField::is_zero(k.sub(lhs, rhs));
    }
  return count;
}

}  // namespace koecher::testing
