#include "koecher/elliptic_curves.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace koecher {

Curve::Invariants Curve::invariants() const {
  const auto& [a1, a2, a3, a4, a6] = a;
  Invariants v;
  v.b2 = a1 * a1 + 4 * a2;
  v.b4 = 2 * a4 + a1 * a3;
  v.b6 = a3 * a3 + 4 * a6;
  v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -(v.b2 * v.b2 * v.b2) + 36 * (v.b2 * v.b4) - 216 * v.b6;
  v.disc = -(v.b2 * v.b2 * v.b8) - 8 * (v.b4 * v.b4 * v.b4) - 27 * (v.b6 * v.b6) + 9 * (v.b2 * v.b4 * v.b6);
  return v;
}

FElt Curve::j_invariant() const {
  auto v = invariants();
  if (v.disc.is_zero()) throw std::domain_error("j-invariant of a singular curve");
  FElt c4(v.c4);
  return c4 * c4 * c4 / FElt(v.disc);
}

Curve Curve::rsw(const OElt& r, const OElt& s, const OElt& w) const {
  const auto& [a1, a2, a3, a4, a6] = a;
  Curve e;
  e.a[0] = a1 + 2 * s;
  e.a[1] = a2 - s * a1 + 3 * r - s * s;
  e.a[2] = a3 + r * a1 + 2 * w;
  e.a[3] = a4 - s * a3 + 2 * (r * a2) - (w + r * s) * a1 + 3 * (r * r) - 2 * (s * w);
  e.a[4] = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1;
  return e;
}

Curve Curve::scale_down(const OElt& u) const {
  static constexpr std::array<int, 5> weight{1, 2, 3, 4, 6};
  Curve e;
  for (int i = 0; i < 5; ++i) {
    auto q = a[i].divide(u.pow(weight[i]));
    if (!q) throw std::domain_error("scale_down: model is not divisible");
    e.a[i] = *q;
  }
  return e;
}

std::string Curve::str() const {
  std::string s = "[";
  for (int i = 0; i < 5; ++i) s += a[i].str() + (i < 4 ? ", " : "]");
  return s;
}

Curve Curve::parse(const std::string& text) {
  std::string body = text;
  body.erase(std::remove(body.begin(), body.end(), '['), body.end());
  body.erase(std::remove(body.begin(), body.end(), ']'), body.end());
  Curve e;
  std::stringstream ss(body);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 5) throw std::invalid_argument("curve needs five coefficients: " + text);
    e.a[i++] = OElt::parse(item);
  }
  if (i != 5) throw std::invalid_argument("curve needs five coefficients: " + text);
  return e;
}

namespace {

constexpr int kInfinite = INT_MAX;

}  // namespace

LocalData tate_loop(const Curve& input, const PrimeIdeal& P) {
  ResidueField k(P);
  const OElt pi = P.gen;
  const Int p = P.p;
  auto val = [&](const OElt& x) { return x.is_zero() ? kInfinite : valuation(x, P); };
  auto pdiv = [&](const OElt& x) { return x.is_zero() || P.ideal.contains(x); };
  auto pinv = [&](const OElt& x) { return k.lift(k.inv(k.reduce(x))); };
  auto pred = [&](const OElt& x) { return k.lift(k.reduce(x)); };
  auto proot = [&](const OElt& x, int e) { return k.lift(e == 2 ? k.sqrt(k.reduce(x)) : k.cbrt(k.reduce(x))); };
  auto divpi = [&](const OElt& x, int n) {
    auto q = x.divide(pi.pow(n));
    if (!q) throw std::logic_error("Tate's algorithm: expected divisibility failed");
    return *q;
  };

  Curve e = input;
  LocalData out;
  out.prime = P;
  for (;;) {
    auto inv = e.invariants();
    int vd = val(inv.disc);
    if (vd == kInfinite) throw std::domain_error("Tate's algorithm on a singular curve");
    out.disc_valuation = vd;
    out.minimal = e;
    if (vd == 0) {
      out.conductor_exponent = 0;
      out.kodaira = "I0";
      return out;
    }
    // Move the singular point to (0, 0).
    OElt r, w;
    const auto& a = e.a;
    if (p == 2) {
      if (pdiv(inv.b2)) {
        r = proot(a[3], 2);
        w = proot(((r + a[1]) * r + a[3]) * r + a[4], 2);
      } else {
        OElt tmp = pinv(a[0]);
        r = tmp * a[2];
        w = tmp * (a[3] + r * r);
      }
    } else if (p == 3) {
      r = pdiv(inv.b2) ? proot(-inv.b6, 3) : -(pinv(inv.b2) * inv.b4);
      w = a[0] * r + a[2];
    } else {
      r = pdiv(inv.c4) ? -(pinv(OElt(12)) * inv.b2) : -(pinv(12 * inv.c4) * (inv.c6 + inv.b2 * inv.c4));
      w = -(pinv(OElt(2)) * (a[0] * r + a[2]));
    }
    e = e.rsw(pred(r), OElt(0), pred(w));
    inv = e.invariants();
    out.minimal = e;
    if (!pdiv(inv.b2)) {
      out.conductor_exponent = 1;
      out.kodaira = "I" + std::to_string(vd);
      return out;
    }
    if (val(e.a[4]) < 2) {
      out.conductor_exponent = vd;
      out.kodaira = "II";
      return out;
    }
    if (val(inv.b8) < 3) {
      out.conductor_exponent = vd - 1;
      out.kodaira = "III";
      return out;
    }
    if (val(inv.b6) < 3) {
      out.conductor_exponent = vd - 2;
      out.kodaira = "IV";
      return out;
    }
    OElt s;
    if (p == 2) {
      s = proot(e.a[1], 2);
      w = pi * proot(divpi(e.a[4], 2), 2);
    } else if (p == 3) {
      s = e.a[0];
      w = e.a[2];
    } else {
      s = -(e.a[0] * pinv(OElt(2)));
      w = -(e.a[2] * pinv(OElt(2)));
    }
    e = e.rsw(OElt(0), s, w);
    out.minimal = e;
    OElt b = divpi(e.a[1], 1), c = divpi(e.a[3], 2), d = divpi(e.a[4], 3);
    OElt disc3 = 27 * (d * d) - b * b * c * c + 4 * (b * b * b * d) - 18 * (b * c * d) + 4 * (c * c * c);
    OElt x = 3 * c - b * b;
    if (!pdiv(disc3)) {
      out.conductor_exponent = vd - 4;
      out.kodaira = "I0*";
      return out;
    }
    if (!pdiv(x)) {
      if (p == 2)
        r = proot(c, 2);
      else if (p == 3)
        r = c * pinv(b);
      else
        r = (b * c - 9 * d) * pinv(2 * x);
      e = e.rsw(pi * pred(r), OElt(0), OElt(0));
      int ix = 3, iy = 3;
      OElt mx = pi * pi, my = mx;
      for (;;) {
        auto quot = [&](const OElt& num, const OElt& den) {
          auto q = num.divide(den);
          if (!q) throw std::logic_error("Tate's algorithm: I_n* step lost divisibility");
          return *q;
        };
        OElt a2t = divpi(e.a[1], 1), a3t = quot(e.a[2], my), a4t = quot(divpi(e.a[3], 1), mx),
             a6t = quot(quot(e.a[4], mx), my);
        if (!pdiv(a3t * a3t + 4 * a6t)) break;
        w = p == 2 ? my * proot(a6t, 2) : my * pred(-(a3t * pinv(OElt(2))));
        e = e.rsw(OElt(0), OElt(0), w);
        my = my * pi;
        ++iy;
        a2t = divpi(e.a[1], 1);
        a3t = quot(e.a[2], my);
        a4t = quot(divpi(e.a[3], 1), mx);
        a6t = quot(quot(e.a[4], mx), my);
        if (!pdiv(a4t * a4t - 4 * (a6t * a2t))) break;
        r = p == 2 ? mx * proot(a6t * pinv(a2t), 2) : mx * pred(-(a4t * pinv(2 * a2t)));
        e = e.rsw(r, OElt(0), OElt(0));
        mx = mx * pi;
        ++ix;
      }
      out.minimal = e;
      out.conductor_exponent = vd - ix - iy + 1;
      out.kodaira = "I" + std::to_string(ix + iy - 5) + "*";
      return out;
    }
    if (p == 2)
      r = b;
    else if (p == 3)
      r = proot(-d, 3);
    else
      r = -(b * pinv(OElt(3)));
    e = e.rsw(pi * pred(r), OElt(0), OElt(0));
    out.minimal = e;
    OElt a3t = divpi(e.a[2], 2), a6t = divpi(e.a[4], 4);
    if (!pdiv(a3t * a3t + 4 * a6t)) {
      out.conductor_exponent = vd - 6;
      out.kodaira = "IV*";
      return out;
    }
    w = p == 2 ? -(pi * pi * proot(a6t, 2)) : pi * pi * pred(-(a3t * pinv(OElt(2))));
    e = e.rsw(OElt(0), OElt(0), w);
    out.minimal = e;
    if (val(e.a[3]) < 4) {
      out.conductor_exponent = vd - 7;
      out.kodaira = "III*";
      return out;
    }
    if (val(e.a[4]) < 6) {
      out.conductor_exponent = vd - 8;
      out.kodaira = "II*";
      return out;
    }
    e = e.scale_down(pi);
  }
}

LocalData tate(const Curve& e, const PrimeIdeal& P) {
  if (P.p <= 3) return tate_loop(e, P);
  auto inv = e.invariants();
  if (inv.disc.is_zero()) throw std::domain_error("Tate's algorithm on a singular curve");
  auto val = [&](const OElt& x) { return x.is_zero() ? kInfinite : valuation(x, P); };
  int v4 = val(inv.c4), v6 = val(inv.c6), vd = val(inv.disc);
  int k = std::min({v4 / 4, v6 / 6, vd / 12});
  vd -= 12 * k;
  if (v4 != kInfinite) v4 -= 4 * k;
  LocalData out;
  out.prime = P;
  out.disc_valuation = vd;
  out.minimal = e;
  if (k > 0) out.minimal = Curve{{OElt(0), OElt(0), OElt(0), -27 * inv.c4, -54 * inv.c6}}.scale_down(P.gen.pow(k));
  if (vd == 0) {
    out.kodaira = "I0";
  } else if (v4 == 0) {
    out.conductor_exponent = 1;
    out.kodaira = "I" + std::to_string(vd);
  } else {
    out.conductor_exponent = 2;
    static const std::map<int, std::string> additive = {{2, "II"}, {3, "III"}, {4, "IV"}, {6, "I0*"},
                                                        {8, "IV*"}, {9, "III*"}, {10, "II*"}};
    auto it = additive.find(vd);
    out.kodaira = v4 == 2 && vd > 6 ? "I" + std::to_string(vd - 6) + "*" : it->second;
  }
  return out;
}

ConductorData conductor(const Curve& e) {
  OElt disc = e.discriminant();
  if (disc.is_zero()) throw std::domain_error("conductor of a singular curve");
  ConductorData out;
  out.conductor = Ideal::unit();
  for (const auto& [P, v] : factor_ideal(Ideal::principal(disc))) {
    (void)v;
    LocalData loc = tate(e, P);
    for (int i = 0; i < loc.conductor_exponent; ++i) out.conductor = out.conductor * P.ideal;
    out.local.push_back(std::move(loc));
  }
  return out;
}

namespace {

FElt field_pow(FElt x, int n) {
  FElt r(1);
  for (; n; n >>= 1, x = x * x)
    if (n & 1) r = r * x;
  return r;
}

// Integral y whose embeddings are m times an n-th root of the embeddings (xr, xc).
std::vector<OElt> root_candidates(double xr, std::complex<double> xc, int n, double mr, std::complex<double> mc) {
  std::vector<double> reals;
  if (n % 2) {
    reals.push_back(xr < 0 ? -std::pow(-xr, 1.0 / n) : std::pow(xr, 1.0 / n));
  } else if (xr > 0) {
    double r = std::pow(xr, 1.0 / n);
    reals = {r, -r};
  } else {
    return {};
  }
  const double pi = std::acos(-1.0);
  std::vector<OElt> out;
  for (double yr0 : reals)
    for (int kk = 0; kk < n; ++kk) {
      double yr = yr0 * mr;
      std::complex<double> yc =
          mc * std::pow(std::abs(xc), 1.0 / n) * std::polar(1.0, (std::arg(xc) + 2 * pi * kk) / n);
      if (auto y = nearest_integral(yr, yc)) out.push_back(*y);
    }
  return out;
}

// Some u in F with u^n = num / den.
std::optional<FElt> field_root(const OElt& num, const OElt& den, int n) {
  FElt q = FElt(num) / FElt(den);
  // u * den is integral since its n-th power num * den^(n-1) is.
  for (const OElt& y : root_candidates(q.real(), q.cplx(), n, den.real(), den.cplx())) {
    FElt u = FElt(y) / FElt(den);
    if (field_pow(u, n) == q) return u;
  }
  return std::nullopt;
}

}  // namespace

std::optional<OElt> integral_root(const OElt& x, int n) {
  if (n < 1) throw std::invalid_argument("integral_root: n must be positive");
  if (x.is_zero()) return OElt(0);
  for (const OElt& y : root_candidates(x.real(), x.cplx(), n, 1.0, 1.0))
    if (field_pow(FElt(y), n) == FElt(x)) return y;
  return std::nullopt;
}

namespace {

std::optional<Isomorphism> with_scale(const Curve& e1, const Curve& e2, const FElt& u) {
  std::array<FElt, 5> a, b;
  for (int i = 0; i < 5; ++i) {
    a[i] = FElt(e1.a[i]);
    b[i] = FElt(e2.a[i]);
  }
  const FElt half(mpq_class(1, 2)), third(mpq_class(1, 3));
  FElt u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  FElt s = (u * b[0] - a[0]) * half;
  FElt r = (u2 * b[1] - a[1] + s * a[0] + s * s) * third;
  FElt w = (u3 * b[2] - a[2] - r * a[0]) * half;
  FElt a4 = a[3] - s * a[2] + FElt(2) * r * a[1] - (w + r * s) * a[0] + FElt(3) * r * r - FElt(2) * s * w;
  FElt a6 = a[4] + r * a[3] + r * r * a[1] + r * r * r - w * a[2] - w * w - r * w * a[0];
  if (!(u4 * b[3] == a4 && u6 * b[4] == a6)) return std::nullopt;
  return Isomorphism{u, r, s, w};
}

}  // namespace

std::optional<Isomorphism> isomorphic(const Curve& e1, const Curve& e2) {
  auto v1 = e1.invariants(), v2 = e2.invariants();
  if (v1.disc.is_zero() || v2.disc.is_zero()) throw std::domain_error("isomorphic: singular curve");
  if (e1.j_invariant() != e2.j_invariant()) return std::nullopt;
  std::vector<FElt> scales;
  if (v1.c4.is_zero()) {
    if (auto u = field_root(v1.c6, v2.c6, 6)) scales.push_back(*u);
  } else if (v1.c6.is_zero()) {
    if (auto u = field_root(v1.c4, v2.c4, 4)) scales.push_back(*u);
  } else {
    if (auto u = field_root(v1.c6 * v2.c4, v1.c4 * v2.c6, 2)) scales.push_back(*u);
  }
  for (const auto& u : scales)
    for (const FElt& su : {u, -u})
      if (auto iso = with_scale(e1, e2, su)) return iso;
  return std::nullopt;
}

Int count_points(const Curve& input, const PrimeIdeal& P) {
  Curve e = input;
  if (P.ideal.contains(e.discriminant())) {
    LocalData loc = tate(e, P);
    if (loc.conductor_exponent > 0) throw std::domain_error("count_points at a prime of bad reduction");
    e = loc.minimal;
  }
  ResidueField k(P);
  std::array<ResidueField::Elem, 5> a;
  for (int i = 0; i < 5; ++i) a[i] = k.reduce(e.a[i]);
  const Int q = k.size();
  Int count = 1;
  for (Int idx = 0; idx < q; ++idx) {
    auto x = k.element(idx);
    auto lin = k.add(k.mul(a[0], x), a[2]);
    auto rhs = k.add(k.mul(k.add(k.mul(k.add(x, a[1]), x), a[3]), x), a[4]);
    if (k.characteristic() == 2) {
      if (ResidueField::is_zero(lin)) {
        count += 1;
        continue;
      }
      auto c = k.mul(rhs, k.inv(k.mul(lin, lin)));
      auto tr = c, pw = c;
      for (int i = 1; i < k.degree(); ++i) {
        pw = k.mul(pw, pw);
        tr = k.add(tr, pw);
      }
      count += ResidueField::is_zero(tr) ? 2 : 0;
      continue;
    }
    auto d = k.add(k.mul(lin, lin), k.mul(k.from_int(4), rhs));
    if (ResidueField::is_zero(d))
      count += 1;
    else
      count += k.is_square(d) ? 2 : 0;
  }
  return count;
}

Int trace_of_frobenius(const Curve& e, const PrimeIdeal& P) { return P.norm() + 1 - count_points(e, P); }

std::vector<CurveClass> isomorphism_classes(const std::vector<FoundCurve>& curves) {
  std::map<std::pair<Ideal, std::string>, std::vector<std::size_t>> buckets;
  std::vector<FElt> js;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    FElt j = curves[i].curve.j_invariant();
    buckets[{curves[i].conductor, j.str()}].push_back(i);
    js.push_back(j);
  }
  std::vector<CurveClass> out;
  for (const auto& [key, members] : buckets) {
    std::vector<std::size_t> reps;
    std::vector<CurveClass> local;
    for (std::size_t i : members) {
      std::size_t c = 0;
      for (; c < reps.size(); ++c)
        if (isomorphic(curves[reps[c]].curve, curves[i].curve)) break;
      if (c == reps.size()) {
        reps.push_back(i);
        local.push_back({curves[i].curve, curves[i].conductor, js[i], 0});
      }
      ++local[c].members;
      local[c].representative = std::min(local[c].representative, curves[i].curve);
    }
    for (auto& c : local) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const CurveClass& x, const CurveClass& y) {
    if (x.conductor.norm() != y.conductor.norm()) return x.conductor.norm() < y.conductor.norm();
    if (!(x.conductor == y.conductor)) return x.conductor < y.conductor;
    return x.representative < y.representative;
  });
  return out;
}

SearchResult search_box(const SearchParams& params) {
  if (params.box < 0) throw std::invalid_argument("box size must be nonnegative");
  const int B = params.box;
  std::vector<OElt> box;
  for (Int c2 = -B; c2 <= B; ++c2)
    for (Int c1 = -B; c1 <= B; ++c1)
      for (Int c0 = -B; c0 <= B; ++c0) box.emplace_back(c0, c1, c2);
  const std::size_t n = box.size();
  std::vector<double> er(n);
  std::vector<std::complex<double>> ec(n);
  std::vector<OElt> sq(n);
  std::vector<double> sqr(n);
  std::vector<std::complex<double>> sqc(n);
  for (std::size_t i = 0; i < n; ++i) {
    er[i] = box[i].real();
    ec[i] = box[i].cplx();
    sq[i] = box[i] * box[i];
    sqr[i] = er[i] * er[i];
    sqc[i] = ec[i] * ec[i];
  }
  const double limit = static_cast<double>(params.disc_bound) * (1 + 1e-9) + 1;
  // Smallest prime factors up to the discriminant bound; a rational prime p with p^e || N(disc) and e < 12
  // lies under some prime that survives minimalization, so p divides the conductor norm.
  std::vector<std::uint32_t> spf;
  if (params.disc_bound <= 200000000) {
    spf.assign(static_cast<std::size_t>(params.disc_bound) + 1, 0);
    for (std::size_t i = 2; i < spf.size(); ++i)
      if (!spf[i])
        for (std::size_t j = i; j < spf.size(); j += i)
          if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
  }
  auto conductor_lower_bound = [&](Int m) -> Int {
    if (spf.empty()) return 1;
    Int bound = 1;
    while (m > 1) {
      Int p = spf[m];
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      if (e < 12) bound *= p;
    }
    return bound;
  };

  SearchResult result;
  result.tuples = n * n * n * n * n;
  std::mutex mu;
  std::size_t next_a1 = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i1;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next_a1 >= n) return;
        i1 = next_a1++;
      }
      std::vector<FoundCurve> found;
      std::size_t passed = 0;
      const OElt& a1 = box[i1];
      for (std::size_t i3 = 0; i3 < n; ++i3) {
        const OElt& a3 = box[i3];
        OElt a3sq = a3 * a3;
        for (std::size_t i2 = 0; i2 < n; ++i2) {
          const OElt& a2 = box[i2];
          OElt b2 = a1 * a1 + 4 * a2;
          for (std::size_t i4 = 0; i4 < n; ++i4) {
            const OElt& a4 = box[i4];
            OElt b4 = 2 * a4 + a1 * a3;
            OElt k = a2 * a3sq - a1 * a3 * a4 - a4 * a4;
            // disc = A + B a6 - 432 a6^2
            OElt A = -(b2 * b2 * k) - 8 * (b4 * b4 * b4) - 27 * (a3sq * a3sq) + 9 * (b2 * b4 * a3sq);
            OElt Bc = -(b2 * b2 * b2) - 216 * a3sq + 36 * (b2 * b4);
            double Ar = A.real(), Br = Bc.real();
            std::complex<double> Ac = A.cplx(), Bcc = Bc.cplx();
            for (std::size_t i6 = 0; i6 < n; ++i6) {
              double dr = Ar + Br * er[i6] - 432 * sqr[i6];
              std::complex<double> dc = Ac + Bcc * ec[i6] - 432.0 * sqc[i6];
              double nm = std::fabs(dr) * std::norm(dc);
              if (nm > limit) continue;
              OElt disc = A + Bc * box[i6] - 432 * sq[i6];
              if (disc.is_zero()) continue;
              Int128 dn = disc.norm();
              if (dn < 0) dn = -dn;
              if (dn > params.disc_bound) continue;
              ++passed;
              Curve e{{a1, a2, a3, a4, box[i6]}};
              if (conductor_lower_bound(static_cast<Int>(dn)) > params.conductor_bound) continue;
              ConductorData cd = conductor(e);
              if (cd.norm() > params.conductor_bound) continue;
              found.push_back({e, static_cast<Int>(dn), cd.conductor});
            }
          }
        }
      }
      std::lock_guard<std::mutex> lk(mu);
      result.disc_passed += passed;
      for (auto& f : found) result.curves.push_back(std::move(f));
    }
  };
  int jobs = std::max(1, params.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(result.curves.begin(), result.curves.end(),
            [](const FoundCurve& x, const FoundCurve& y) { return x.curve < y.curve; });
  result.classes = isomorphism_classes(result.curves);
  return result;
}

}  // namespace koecher
