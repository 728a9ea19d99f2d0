#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "koecher/ideal.hpp"

using namespace koecher;

namespace {

OElt random_elt(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<Int> d(-bound, bound);
  return {d(rng), d(rng), d(rng)};
}

// Norm through the embeddings: sigma_1(x) |sigma_2(x)|^2.
double embedded_norm(const OElt& x) { return x.real() * std::norm(x.cplx()); }

// Roots of x^3 - x^2 + 1 mod p by exhaustion, with multiplicity via derivative.
std::vector<Int> brute_roots(Int p) {
  std::vector<Int> r;
  for (Int x = 0; x < p; ++x)
    if (mod_pos(x * x * x - x * x + 1, p) == 0) r.push_back(x);
  return r;
}

}  // namespace

TEST_CASE("norm and trace of small elements") {
  CHECK(OElt(0).norm() == 0);
  CHECK(OElt::t().norm() == -1);
  CHECK(OElt::eps().norm() == 1);
  CHECK(OElt(0, 0, 1).trace() == 1);
  CHECK(OElt::t().trace() == 1);
  CHECK(OElt(3).trace() == 9);
  // t^3 = t^2 - 1
  CHECK(OElt::t().pow(3) == OElt(-1, 0, 1));
  CHECK(OElt::t() * OElt(1, 0, -1) == OElt(0, 1, 0) * OElt(1, 0, -1));
  CHECK(OElt::eps() * OElt::eps_inv() == OElt(1));
}

TEST_CASE("norm agrees with the embedding product and is multiplicative") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    OElt x = random_elt(rng, 40), y = random_elt(rng, 40);
    double en = embedded_norm(x);
    CHECK(std::fabs(static_cast<double>(x.norm()) - en) < 1e-7 * (1 + std::fabs(en)));
    CHECK((x * y).norm() == x.norm() * y.norm());
    CHECK((x + y).trace() == x.trace() + y.trace());
    double tr = x.real() + 2 * x.cplx().real();
    CHECK(std::fabs(tr - static_cast<double>(x.trace())) < 1e-9);
  }
}

TEST_CASE("exact division, adjugate and field inverse") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    OElt x = random_elt(rng, 30), y = random_elt(rng, 30);
    if (y.is_zero()) continue;
    auto q = (x * y).divide(y);
    REQUIRE(q);
    CHECK(*q == x);
    CHECK(x * x.adjugate() == OElt(static_cast<Int>(x.norm())));
    if (!x.is_zero()) {
      FElt fx(x);
      FElt inv = fx.inverse();
      CHECK(fx * inv == FElt(1));
    }
  }
  CHECK_FALSE(OElt(1).divide(OElt(2)).has_value());
}

TEST_CASE("exact real sign") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    OElt x = random_elt(rng, 1000);
    double v = x.real();
    if (std::fabs(v) > 1e-6) CHECK(x.real_sign() == (v > 0 ? 1 : -1));
  }
  // near-cancelling element: t^2 - t - 1 + ... evaluate difference of close algebraic numbers
  OElt big = OElt::t().pow(40);
  CHECK(big.real_sign() == 1);
  CHECK((-big).real_sign() == -1);
  CHECK(OElt(0).real_sign() == 0);
  FElt tiny(mpq_class(1, 1000000007), 0, 0);
  CHECK(tiny.real_sign() == 1);
}

TEST_CASE("unit group") {
  std::set<OElt> seen;
  for (int k = 1; k <= 20; ++k) {
    OElt u = eps_pow(k);
    CHECK(u.is_unit());
    CHECK(seen.insert(u).second);
    auto lg = unit_log(-u);
    CHECK(lg.sign == -1);
    CHECK(lg.k == k);
    CHECK(unit_log(eps_pow(-k)).k == -k);
  }
  CHECK(eps_pow(3) * eps_pow(-3) == OElt(1));
}

TEST_CASE("element parsing and printing") {
  CHECK(OElt::parse("4t^2 - t - 5") == OElt(-5, -1, 4));
  CHECK_THROWS(OElt::parse("c"));
  CHECK(OElt::parse("1+2*t+3*t^2") == OElt(1, 2, 3));
  CHECK(OElt::parse("-t^2+1") == OElt(1, 0, -1));
  CHECK(OElt::parse("t^3") == OElt(-1, 0, 1));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    OElt x = random_elt(rng, 9);
    CHECK(OElt::parse(x.str()) == x);
  }
}

TEST_CASE("rational prime factorization") {
  auto f5 = factor_rational_prime(5);
  REQUIRE(f5.size() == 2);
  CHECK(f5[0].norm() == 5);
  CHECK(f5[1].norm() == 25);
  CHECK(brute_roots(5) == std::vector<Int>{2});
  CHECK(f5[0].ideal.contains(OElt(-2, 1, 0)));
  auto f2 = factor_rational_prime(2);
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].norm() == 8);
  CHECK(brute_roots(2).empty());
  auto f23 = factor_rational_prime(23);
  int ramified = 0;
  for (const auto& P : f23) ramified += P.ram > 1;
  CHECK(ramified == 1);
  for (Int p = 2; p < 100; ++p) {
    if (!is_prime(p)) continue;
    auto fs = factor_rational_prime(p);
    int sum = 0;
    bool ram = false;
    Ideal prod = Ideal::unit();
    for (const auto& P : fs) {
      sum += P.ram * P.degree;
      ram = ram || P.ram > 1;
      for (int e = 0; e < P.ram; ++e) prod = prod * P.ideal;
      CHECK(std::abs(static_cast<Int>(P.gen.norm())) == P.norm());
    }
    CHECK(sum == 3);
    CHECK(ram == (p == 23));
    CHECK(prod == Ideal::principal(OElt(p)));
    // number of degree-one primes equals the number of roots mod p
    int deg1 = 0;
    for (const auto& P : fs) deg1 += P.degree == 1;
    CHECK(static_cast<std::size_t>(deg1) == brute_roots(p).size());
  }
}

TEST_CASE("ideal norms, products, sums and intersections") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    OElt x = random_elt(rng, 12), y = random_elt(rng, 12);
    if (x.is_zero() || y.is_zero()) continue;
    Ideal a = Ideal::principal(x), b = Ideal::principal(y);
    CHECK(static_cast<Int128>(a.norm()) == (x.norm() < 0 ? -x.norm() : x.norm()));
    CHECK((a * b).norm() == a.norm() * b.norm());
    CHECK((a * b) == Ideal::principal(x * y));
    CHECK(a.divides(a * b));
    Ideal s = a + b, m = a.intersect(b);
    CHECK(s.norm() * m.norm() == a.norm() * b.norm());
    CHECK(s.divides(a));
    CHECK(a.divides(m));
    CHECK(b.divides(m));
  }
}

TEST_CASE("ideal factorization round trip") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 60; ++i) {
    OElt x = random_elt(rng, 15);
    if (x.is_zero()) continue;
    Ideal a = Ideal::principal(x);
    Ideal prod = Ideal::unit();
    for (const auto& [P, e] : factor_ideal(a)) {
      CHECK(valuation(x, P) == e);
      for (int k = 0; k < e; ++k) prod = prod * P.ideal;
    }
    CHECK(prod == a);
  }
}

TEST_CASE("canonical generator") {
  CHECK(Ideal::unit().generator() == OElt(1));
  CHECK(Ideal::principal(OElt::t()).generator() == OElt(1));
  CHECK(Ideal::principal(-OElt::t()).generator() == OElt(1));
  OElt a = OElt::parse("2t-1");
  CHECK(Ideal::principal(a).generator() == Ideal::principal(-eps_pow(2) * a).generator());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    OElt x = random_elt(rng, 10);
    if (x.is_zero()) continue;
    OElt g = Ideal::principal(x).generator();
    CHECK(Ideal::principal(g) == Ideal::principal(x));
    for (int k = -5; k <= 5; ++k) {
      CHECK(Ideal::principal(eps_pow(k) * x).generator() == g);
      CHECK(Ideal::principal(-(eps_pow(k) * x)).generator() == g);
    }
  }
  // the level of norm 89 used later
  OElt n89 = OElt::parse("4t^2-t-5");
  CHECK(std::abs(static_cast<Int>(n89.norm())) == 89);
}

TEST_CASE("ideals up to a bound") {
  auto ids = ideals_up_to(30);
  std::set<Ideal::Hnf> distinct;
  for (const auto& a : ids) {
    CHECK(a.norm() <= 30);
    distinct.insert(a.hnf());
  }
  CHECK(distinct.size() == ids.size());
  // count of ideals of norm 5: one prime; norm 25: p^2 and the degree-two prime
  int n5 = 0, n25 = 0;
  for (const auto& a : ids) {
    n5 += a.norm() == 5;
    n25 += a.norm() == 25;
  }
  CHECK(n5 == 1);
  CHECK(n25 == 2);
}

TEST_CASE("residue fields") {
  std::mt19937_64 rng(8);
  for (Int p : {2, 3, 5, 7, 11, 23, 89}) {
    for (const auto& P : factor_rational_prime(p)) {
      if (P.norm() > 2000) continue;
      ResidueField k(P);
      CHECK(k.size() == P.norm());
      // reduction is a ring homomorphism that kills the ideal
      for (int i = 0; i < 100; ++i) {
        OElt x = random_elt(rng, 50), y = random_elt(rng, 50);
        CHECK(k.reduce(x * y) == k.mul(k.reduce(x), k.reduce(y)));
        CHECK(k.reduce(x + y) == k.add(k.reduce(x), k.reduce(y)));
      }
      for (const auto& b : P.ideal.basis()) CHECK(ResidueField::is_zero(k.reduce(b)));
      // residues of the ideal HNF map bijectively
      std::set<Int> img;
      for (Int idx = 0; idx < P.norm(); ++idx) img.insert(k.index(k.reduce(P.ideal.residue_from_index(idx))));
      CHECK(static_cast<Int>(img.size()) == P.norm());
      if (p == 2) {
        auto e = k.element(5);
        CHECK(k.mul(k.sqrt(e), k.sqrt(e)) == e);
      }
      if (p == 3) {
        auto e = k.element(11);
        auto c = k.cbrt(e);
        CHECK(k.mul(c, k.mul(c, c)) == e);
      }
    }
  }
}
