#include <cmath>
#include <complex>

#include "doctest.h"
#include "koecher/field_linalg.hpp"
#include "test_support.hpp"

using namespace koecher;
using namespace koecher::testing;

namespace {

// <q(z), q(x)> from floating embeddings: (z.x)^2 at the real place, 2 |z^* x|^2 at the complex one.
double inner_numeric(const Vec2& z, const Vec2& x) {
  double s = z[0].real() * x[0].real() + z[1].real() * x[1].real();
  std::complex<double> h = std::conj(z[0].cplx()) * x[0].cplx() + std::conj(z[1].cplx()) * x[1].cplx();
  return s * s + 2 * std::norm(h);
}

double value_numeric(const Form& y, const Vec2& x) { return pairing_approx(rank_one(x), embed(y)); }

}  // namespace

TEST_CASE("rank-one points pair like the embedded inner product") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Vec2 x = random_vec(rng, 6), z = random_vec(rng, 6);
    double want = inner_numeric(z, x);
    CHECK(std::fabs(rank_one_inner(z, x).real() - want) < 1e-8 * (1 + want));
    double got = evaluate(dual_form(x), z).real();
    CHECK(std::fabs(got - want) < 1e-7 * (1 + want));
  }
}

TEST_CASE("identity form and orthogonality") {
  const Vec2 e1{1, 0}, e2{0, 1};
  CHECK(evaluate(identity_form(), e1) == FElt(3));
  CHECK(evaluate(dual_form(e1), e1) == FElt(3));
  CHECK(evaluate(dual_form(e1), e2).is_zero());
  // q(e1) + q(e2) is the identity point
  Form a = dual_form(e1), b = dual_form(e2);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    Vec2 z = random_vec(rng, 5);
    CHECK(evaluate(a, z) + evaluate(b, z) == evaluate(identity_form(), z));
  }
}

TEST_CASE("Gram block of e1 under the identity form") {
  // B(t^i e1, t^j e1) = sigma_1(t^{i+j}) + 2 Re(sigma_2(t^i) conj sigma_2(t^j)) from numeric roots
  const double r = kRealRoot;
  const std::complex<double> z(kComplexRootRe, kComplexRootIm);
  auto g = gram(identity_form());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double want = std::pow(r, i + j) + 2 * (std::pow(z, i) * std::conj(std::pow(z, j))).real();
      CHECK(std::fabs(g[i][j].real() - want) < 1e-12);
      CHECK(g[i][j + 3].is_zero());
    }
  CHECK(g[0][0] == FElt(3));
  // Newton power sums of x^3 - x^2 + 1 (the bilinear trace form, for comparison)
  CHECK(OElt(1).trace() == 3);
  CHECK(OElt::t().pow(3).trace() == -2);
  CHECK(OElt::t().pow(4).trace() == -3);
}

TEST_CASE("rank-one points are positive semidefinite of rank two") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    Vec2 x = random_vec(rng, 8);
    auto g = gram(dual_form(x));
    for (int mask = 1; mask < 64; ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < 6; ++i)
        if (mask >> i & 1) idx.push_back(i);
      std::vector<std::vector<FElt>> m;
      for (int i : idx) {
        std::vector<FElt> row;
        for (int j : idx) row.push_back(g[i][j]);
        m.push_back(row);
      }
      int s = determinant(m).real_sign();
      CHECK(s >= 0);
      if (idx.size() >= 4) CHECK(s == 0);
    }
  }
}

TEST_CASE("point action and pullback") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 30; ++i) {
    Mat2 g = random_gl2(rng);
    Vec2 x = random_vec(rng, 5);
    Form y = identity_form();
    CHECK(evaluate(pullback(y, g), x) == evaluate(y, g * x));
    Linear7 l = point_action(g);
    Point p = rank_one(x), q = rank_one(g * x);
    for (int r = 0; r < 7; ++r) {
      FElt s;
      for (int c = 0; c < 7; ++c) s += l[r][c] * FElt(p[c]);
      CHECK(s == FElt(q[r]));
    }
  }
}

TEST_CASE("positivity test") {
  CHECK(is_positive_definite(identity_form()));
  CHECK_FALSE(is_positive_definite(dual_form(Vec2{1, 0})));
  Form neg = identity_form();
  for (auto& c : neg) c = -c;
  CHECK_FALSE(is_positive_definite(neg));
}

TEST_CASE("spanning points and size") {
  const Vec2 e1{1, 0}, e2{0, 1};
  CHECK(spanning_point(e1) == e1);
  CHECK(spanning_point(-e1) == e1);
  // q(eps^3 e1) lies on a different ray from q(e1)
  Vec2 u3 = scale(eps_pow(3), e1);
  CHECK(same_up_to_sign(spanning_point(u3), u3));
  CHECK(spanning_point(Vec2{OElt(0, 2, 0), OElt(0, 0, 2)}) == spanning_point(Vec2{OElt::t(), OElt(0, 0, 1)}));
  CHECK(size(e1, e2) == 1);
  CHECK(size(e1, scale(OElt::t(), e1)) == 0);
  Vec2 v{OElt(0, 0, 1), OElt(-1, 1, 0)};
  double n = OElt(-1, 1, 0).real() * std::norm(OElt(-1, 1, 0).cplx());
  CHECK(static_cast<double>(size(e1, v)) == doctest::Approx(std::fabs(n)));
  std::mt19937_64 rng(15);
  for (int i = 0; i < 200; ++i) {
    Vec2 x = random_vec(rng, 6);
    CHECK(spanning_point(spanning_point(x)) == spanning_point(x));
    Vec2 y = random_vec(rng, 6);
    Mat2 g = random_gl2(rng);
    CHECK(size(g * x, g * y) == size(x, y));
  }
}

TEST_CASE("bezout and completion") {
  std::mt19937_64 rng(16);
  int done = 0;
  for (int i = 0; i < 400 && done < 60; ++i) {
    Vec2 v = random_vec(rng, 6);
    auto [g, p] = split_content(v);
    CHECK(scale(g, p) == v);
    Mat2 c = completion(p);
    CHECK(c.det() == OElt(1));
    CHECK(c.col(0) == p);
    ++done;
  }
}

TEST_CASE("perfect forms are positive on rank-one points") {
  const auto& fan = shared_fan();
  std::mt19937_64 rng(17);
  for (const auto& t : fan.top)
    for (int i = 0; i < 300; ++i) {
      Vec2 x = random_vec(rng, 10);
      CHECK(evaluate(t.perfect.form, x).real_sign() > 0);
      CHECK(value_numeric(t.perfect.form, x) >= 1 - 1e-9);
    }
}
