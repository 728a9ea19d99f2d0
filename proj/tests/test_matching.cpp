#include <random>

#include "doctest.h"
#include "koecher/koecher_complex.hpp"
#include "koecher/matching.hpp"
#include "tables.hpp"

using namespace koecher;
using namespace koecher::testing;

namespace {

const Fp kF(kFieldPrime);

const Ideal& level89() {
  static const Ideal n = Ideal::principal(OElt::parse("4*t^2 - t - 5"));
  return n;
}

const Curve& curve89() {
  static const Curve e = Curve::parse(curve_table()[0].curve);
  return e;
}

std::vector<PrimeIdeal> good_primes(const Ideal& level, Int bound) {
  std::vector<PrimeIdeal> out;
  for (const auto& q : primes_up_to(bound))
    if (!q.ideal.divides(level)) out.push_back(q);
  return out;
}

DenseMat diagonal(const std::vector<Int>& d) {
  DenseMat m(d.size(), std::vector<std::uint32_t>(d.size(), 0));
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = kF.from_int(d[i]);
  return m;
}

/// A random invertible matrix with its inverse.
std::pair<DenseMat, DenseMat> random_change(int n, std::mt19937_64& rng) {
  for (;;) {
    DenseMat p(n, std::vector<std::uint32_t>(n));
    for (auto& row : p)
      for (auto& x : row) x = static_cast<std::uint32_t>(rng() % kF.prime());
    DenseMat aug(n, std::vector<std::uint32_t>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) aug[i][j] = p[i][j];
      aug[i][n + i] = 1;
    }
    auto piv = rref(aug, kF);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) continue;
    DenseMat inv(n, std::vector<std::uint32_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return {p, inv};
  }
}

DenseMat conjugate(const DenseMat& m, const std::pair<DenseMat, DenseMat>& c) {
  return mat_mul(mat_mul(c.first, m, kF), c.second, kF);
}

/// Operators with the given blocks: each block is a list of (prime index -> eigenvalue) for a 1-dimensional piece.
std::vector<HeckeAction> synthetic(const std::vector<PrimeIdeal>& primes, const std::vector<std::vector<Int>>& diag,
                                   std::mt19937_64& rng) {
  auto change = random_change(static_cast<int>(diag.size()), rng);
  std::vector<HeckeAction> ops;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    std::vector<Int> d;
    for (const auto& row : diag) d.push_back(row[k]);
    ops.push_back({primes[k], conjugate(diagonal(d), change)});
  }
  return ops;
}

}  // namespace

TEST_CASE("packet kinds round trip through their names") {
  for (auto k : {PacketKind::eisenstein, PacketKind::cuspidal_rational, PacketKind::cuspidal_nonrational, PacketKind::old})
    CHECK(parse_kind(kind_name(k)) == k);
  CHECK_THROWS_AS(parse_kind("mystery"), std::invalid_argument);
}

TEST_CASE("Hasse window") {
  CHECK(in_hasse_window(4, 5));
  CHECK_FALSE(in_hasse_window(5, 5));
  CHECK(in_hasse_window(-4, 5));
  CHECK(in_hasse_window(0, 2));
}

TEST_CASE("decomposition into Eisenstein and rational cuspidal packets") {
  std::mt19937_64 rng(1);
  auto primes = good_primes(level89(), 11);
  std::vector<Int> cusp, eis;
  for (const auto& q : primes) {
    cusp.push_back(trace_of_frobenius(curve89(), q));
    eis.push_back(q.norm() + 1);
  }
  auto ops = synthetic(primes, {eis, cusp, eis, eis}, rng);
  auto packets = decompose(level89(), 4, ops, kF);
  CHECK(eisenstein_part(packets) == 3);
  int cuspidal = 0;
  for (const auto& p : packets) {
    if (p.kind == PacketKind::eisenstein) continue;
    ++cuspidal;
    CHECK(p.kind == PacketKind::cuspidal_rational);
    CHECK(p.dimension == 1);
    for (std::size_t k = 0; k < primes.size(); ++k) CHECK(p.eigenvalue(primes[k]) == cusp[k]);
    // the basis vector is an eigenvector of every operator
    for (const auto& op : ops) {
      std::vector<std::uint32_t> img(4, 0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) img[i] = kF.add(img[i], kF.mul(op.matrix[i][j], p.basis[0][j]));
      std::uint32_t lambda = kF.from_int(*p.eigenvalue(op.prime));
      for (int i = 0; i < 4; ++i) CHECK(img[i] == kF.mul(lambda, p.basis[0][i]));
    }
  }
  CHECK(cuspidal == 1);
}

TEST_CASE("eigenvalues outside the window stay together as a non-rational packet") {
  std::mt19937_64 rng(2);
  auto primes = good_primes(level89(), 8);
  REQUIRE(primes.size() >= 2);
  DenseMat m = diagonal({6, 0, 0});
  m[0][0] = kF.from_int(primes[0].norm() + 1);
  m[1][2] = 1;
  m[2][1] = kF.from_int(3);  // eigenvalues +-sqrt(3), both outside or non-rational
  auto change = random_change(3, rng);
  std::vector<HeckeAction> ops{{primes[0], conjugate(m, change)}};
  auto packets = decompose(level89(), 3, ops, kF);
  REQUIRE(packets.size() == 2);
  CHECK(packets[0].kind == PacketKind::eisenstein);
  CHECK(packets[1].kind == PacketKind::cuspidal_nonrational);
  CHECK(packets[1].dimension == 2);
  CHECK_FALSE(packets[1].eigenvalues[0].value);

  ops = synthetic({primes[0]}, {{100}, {static_cast<Int>(primes[0].norm() + 1)}}, rng);
  packets = decompose(level89(), 2, ops, kF);
  CHECK(eisenstein_part(packets) == 1);
  CHECK(packets.back().kind == PacketKind::cuspidal_nonrational);
}

TEST_CASE("a level-89 packet matches the published curve") {
  auto primes = good_primes(level89(), 23);
  Eigenpacket p;
  p.level = level89();
  p.dimension = 1;
  p.kind = PacketKind::cuspidal_rational;
  for (const auto& q : primes) p.eigenvalues.push_back({q, trace_of_frobenius(curve89(), q)});
  CurveClass cls{curve89(), conductor(curve89()).conductor, curve89().j_invariant(), 1};
  MatchReport r = match_level(level89(), {p}, {cls});
  REQUIRE(r.packets.size() == 1);
  CHECK(r.packets[0].candidates == std::vector<Curve>{curve89()});
  CHECK_FALSE(r.packets[0].ambiguous);
  CHECK(r.packets[0].agreements == r.packets[0].primes_checked);
  CHECK(r.unmatched_curves.empty());
  // out-of-sample primes keep agreeing
  for (const auto& q : good_primes(level89(), 60)) {
    if (q.norm() <= 23) continue;
    CHECK(in_hasse_window(trace_of_frobenius(curve89(), q), q.norm()));
  }

  p.eigenvalues[0].value = *p.eigenvalues[0].value + 1;
  r = match_level(level89(), {p}, {cls});
  CHECK(r.packets[0].candidates.empty());
  CHECK(r.unmatched_curves.size() == 1);
}

TEST_CASE("an Eisenstein-only level has an empty report") {
  Ideal n = Ideal::principal(OElt::parse("t^2 + 1"));
  Eigenpacket p;
  p.level = n;
  p.dimension = 3;
  p.kind = PacketKind::eisenstein;
  CurveClass cls{curve89(), conductor(curve89()).conductor, curve89().j_invariant(), 1};
  MatchReport r = match_level(n, {p}, {cls});
  CHECK(r.packets.empty());
  CHECK(r.unmatched_curves.empty());
}

TEST_CASE("old classes are traced to their source level") {
  PrimeIdeal extra;
  for (const auto& q : primes_up_to(5))
    if (q.norm() == 5) extra = q;
  Ideal high = level89() * extra.ideal;
  CHECK(high.norm() == 445);

  Eigenpacket low;
  low.level = level89();
  low.dimension = 1;
  low.kind = PacketKind::cuspidal_rational;
  for (const auto& q : good_primes(level89(), 11)) low.eigenvalues.push_back({q, trace_of_frobenius(curve89(), q)});

  Eigenpacket old = low;
  old.level = high;
  old.dimension = 2;
  old.eigenvalues.clear();
  for (const auto& q : good_primes(high, 11)) old.eigenvalues.push_back({q, trace_of_frobenius(curve89(), q)});
  Eigenpacket eis;
  eis.level = high;
  eis.dimension = 7;
  eis.kind = PacketKind::eisenstein;

  std::vector<std::vector<Eigenpacket>> levels{{low}, {eis, old}};
  auto found = detect_old(levels);
  REQUIRE(found.size() == 1);
  CHECK(found[0].level == high);
  CHECK(found[0].source == level89());
  CHECK(found[0].packet == 1);
  CHECK(levels[1][1].kind == PacketKind::old);
  CHECK(levels[1][1].source == level89());

  // a wrong dimension or a disagreeing eigenvalue is not old
  std::vector<std::vector<Eigenpacket>> wrong_dim{{low}, {old}};
  wrong_dim[1][0].dimension = 3;
  CHECK(detect_old(wrong_dim).empty());
  std::vector<std::vector<Eigenpacket>> wrong_value{{low}, {old}};
  wrong_value[1][0].eigenvalues[0].value = *wrong_value[1][0].eigenvalues[0].value + 2;
  CHECK(detect_old(wrong_value).empty());
}
