#include "koecher/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <unordered_map>

#include "koecher/lattice.hpp"
#include "koecher/zmatrix.hpp"

namespace koecher {

namespace {

std::array<Int, 3> coeffs_of(const OElt& x) { return x.coeffs(); }

Ideal::Hnf narrow_hnf(const ZMat& h) {
  if (h.size() != 3) throw std::domain_error("ideal: generators do not span a full-rank lattice");
  Ideal::Hnf out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = narrow(h[i][j]);
  return out;
}

ZMat rows_of(const std::vector<OElt>& gens) {
  ZMat m;
  const OElt t = OElt::t();
  for (const auto& g : gens) {
    OElt x = g;
    for (int i = 0; i < 3; ++i) {
      m.push_back({mpz_class(x[0]), mpz_class(x[1]), mpz_class(x[2])});
      if (i < 2) x = x * t;
    }
  }
  return m;
}

// T2 Gram matrix on coefficient vectors.
const std::vector<std::vector<double>>& t2_gram() {
  static const std::vector<std::vector<double>> g = [] {
    std::vector<std::vector<double>> m(3, std::vector<double>(3));
    std::array<OElt, 3> b{OElt(1), OElt::t(), OElt(0, 0, 1)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m[i][j] = b[i].real() * b[j].real() + 2 * std::real(b[i].cplx() * std::conj(b[j].cplx()));
    return m;
  }();
  return g;
}

std::mutex g_gen_mutex;
std::map<Ideal::Hnf, OElt>& gen_cache() {
  static std::map<Ideal::Hnf, OElt> c;
  return c;
}

// ---- polynomials over Z/p, low degree first, trimmed.
using Poly = std::vector<Int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, Int p) {
  trim(a);
  Int inv_lead = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    Int c = static_cast<Int>(static_cast<Int128>(a.back()) * inv_lead % p);
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = mod_pos(static_cast<Int>((a[shift + i] - static_cast<Int128>(c) * m[i]) % p), p);
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, Int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<Int>((r[i + j] + static_cast<Int128>(a[i]) * b[j]) % p);
  trim(r);
  return r;
}

Poly poly_powmod(Poly b, Int e, const Poly& m, Int p) {
  Poly r{1};
  b = poly_mod(b, m, p);
  while (e > 0) {
    if (e & 1) r = poly_mod(poly_mul(r, b, p), m, p);
    b = poly_mod(poly_mul(b, b, p), m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, Int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Int inv = invmod(a.back(), p);
    for (auto& c : a) c = static_cast<Int>(static_cast<Int128>(c) * inv % p);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, Int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod_pos(a[i] - b[i], p);
  trim(a);
  return a;
}

Poly poly_divexact(Poly a, const Poly& m, Int p) {
  trim(a);
  Poly q(a.size() >= m.size() ? a.size() - m.size() + 1 : 0, 0);
  Int inv_lead = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    Int c = static_cast<Int>(static_cast<Int128>(a.back()) * inv_lead % p);
    std::size_t shift = a.size() - m.size();
    q[shift] = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = mod_pos(static_cast<Int>((a[shift + i] - static_cast<Int128>(c) * m[i]) % p), p);
    trim(a);
  }
  return q;
}

void split_roots(const Poly& h, Int p, std::mt19937_64& rng, std::vector<Int>& out) {
  if (h.size() <= 1) return;
  if (h.size() == 2) {
    out.push_back(mod_pos(-h[0], p));
    return;
  }
  for (;;) {
    Int a = static_cast<Int>(rng() % static_cast<std::uint64_t>(p));
    Poly s = poly_powmod({a, 1}, (p - 1) / 2, h, p);
    s = poly_sub(s, {1}, p);
    Poly g = poly_gcd(h, s, p);
    if (g.size() > 1 && g.size() < h.size()) {
      split_roots(g, p, rng, out);
      split_roots(poly_divexact(h, g, p), p, rng, out);
      return;
    }
  }
}

const Poly kMinPoly{1, 0, -1, 1};  // x^3 - x^2 + 1

Poly min_poly_mod(Int p) {
  Poly f = kMinPoly;
  for (auto& c : f) c = mod_pos(c, p);
  return f;
}

// Roots with multiplicity.
std::vector<std::pair<Int, int>> roots_mod(Int p) {
  Poly f = min_poly_mod(p);
  std::vector<std::pair<Int, int>> out;
  if (p < 64) {
    for (Int r = 0; r < p; ++r) {
      Poly g = f;
      int mult = 0;
      for (;;) {
        Int v = 0;
        for (std::size_t i = g.size(); i-- > 0;) v = mod_pos(v * r + g[i], p);
        if (v != 0 || g.size() <= 1) break;
        g = poly_divexact(g, {mod_pos(-r, p), 1}, p);
        ++mult;
      }
      if (mult) out.push_back({r, mult});
    }
    return out;
  }
  Poly xp = poly_powmod({0, 1}, p, f, p);
  Poly h = poly_gcd(f, poly_sub(xp, {0, 1}, p), p);
  std::mt19937_64 rng(static_cast<std::uint64_t>(p) * 7919u + 17u);
  std::vector<Int> roots;
  split_roots(h, p, rng, roots);
  std::sort(roots.begin(), roots.end());
  for (Int r : roots) out.push_back({r, 1});
  return out;
}

OElt poly_to_oelt(const Poly& g) {
  OElt x;
  for (std::size_t i = 0; i < g.size(); ++i) x[static_cast<int>(i)] = g[i];
  return x;
}

std::mutex g_prime_mutex;

}  // namespace

// ---------------- Ideal

Ideal Ideal::unit() { return Ideal(Hnf{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }

Ideal Ideal::principal(const OElt& g) {
  if (g.is_zero()) throw std::domain_error("zero ideal");
  return from_generators({g});
}

Ideal Ideal::from_generators(const std::vector<OElt>& gens) {
  std::vector<OElt> nz;
  for (const auto& g : gens)
    if (!g.is_zero()) nz.push_back(g);
  if (nz.empty()) throw std::domain_error("zero ideal");
  return Ideal(narrow_hnf(hermite_form(rows_of(nz))));
}

Ideal Ideal::from_hnf(const Hnf& h) {
  ZMat m(3, std::vector<mpz_class>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = h[i][j];
  Ideal out(narrow_hnf(hermite_form(m)));
  // must be closed under multiplication by t
  for (const auto& b : out.basis())
    if (!out.contains(b * OElt::t())) throw std::domain_error("matrix is not the HNF of an ideal");
  return out;
}

std::array<OElt, 3> Ideal::basis() const {
  return {OElt(h_[0][0], h_[0][1], h_[0][2]), OElt(h_[1][0], h_[1][1], h_[1][2]), OElt(h_[2][0], h_[2][1], h_[2][2])};
}

OElt Ideal::reduce(const OElt& x) const {
  std::array<Int, 3> v = coeffs_of(x);
  for (int i = 0; i < 3; ++i) {
    Int q = floor_div(v[i], h_[i][i]);
    if (q == 0) continue;
    for (int j = i; j < 3; ++j) v[j] = sub_ck(v[j], mul_ck(q, h_[i][j]));
  }
  return {v[0], v[1], v[2]};
}

OElt Ideal::residue_from_index(Int idx) const {
  Int a = idx % h_[0][0];
  idx /= h_[0][0];
  Int b = idx % h_[1][1];
  Int c = idx / h_[1][1];
  return {a, b, c};
}

bool Ideal::divides(const Ideal& other) const {
  for (const auto& b : other.basis())
    if (!contains(b)) return false;
  return true;
}

Ideal Ideal::operator*(const Ideal& o) const {
  std::vector<OElt> gens;
  for (const auto& a : basis())
    for (const auto& b : o.basis()) gens.push_back(a * b);
  return from_generators(gens);
}

Ideal Ideal::operator+(const Ideal& o) const {
  std::vector<OElt> gens;
  for (const auto& a : basis()) gens.push_back(a);
  for (const auto& b : o.basis()) gens.push_back(b);
  return from_generators(gens);
}

Ideal Ideal::intersect(const Ideal& o) const {
  ZMat m;
  for (const auto& a : basis()) m.push_back({a[0], a[1], a[2]});
  for (const auto& b : o.basis()) m.push_back({b[0], b[1], b[2]});
  ZMat u;
  ZMat h = hermite_form(m, &u);
  std::vector<OElt> gens;
  auto ba = basis();
  for (std::size_t k = h.size(); k < u.size(); ++k) {
    mpz_class c[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[j] += u[k][i] * ba[i][j];
    gens.push_back({narrow(c[0]), narrow(c[1]), narrow(c[2])});
  }
  return from_generators(gens);
}

Ideal Ideal::divide_by(const OElt& g) const {
  std::vector<OElt> gens;
  for (const auto& b : basis()) {
    auto q = b.divide(g);
    if (!q) throw std::domain_error("divide_by: " + g.str() + " does not divide " + str());
    gens.push_back(*q);
  }
  return from_generators(gens);
}

OElt Ideal::generator() const {
  if (is_unit()) return OElt(1);
  {
    std::lock_guard<std::mutex> lk(g_gen_mutex);
    auto it = gen_cache().find(h_);
    if (it != gen_cache().end()) return it->second;
  }
  const Int n = norm();
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& b : basis()) rows.push_back({b[0], b[1], b[2]});
  rows = lll_reduce(rows, t2_gram());
  std::array<OElt, 3> b;
  for (int i = 0; i < 3; ++i) b[i] = OElt(narrow(rows[i][0]), narrow(rows[i][1]), narrow(rows[i][2]));
  const auto& g0 = t2_gram();
  std::vector<std::vector<double>> gram(3, std::vector<double>(3, 0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) gram[i][j] += double(b[i][k]) * g0[k][l] * double(b[j][l]);
  std::optional<OElt> found;
  double bound = 4.0 * std::pow(static_cast<double>(n), 2.0 / 3.0);
  for (int attempt = 0; attempt < 40 && !found; ++attempt, bound *= 2) {
    enumerate_short_vectors(gram, bound, [&](const std::vector<Int>& x, double) {
      OElt e = x[0] * b[0] + x[1] * b[1] + x[2] * b[2];
      Int128 en = e.norm();
      if (en == n || en == -n) {
        found = e;
        return false;
      }
      return true;
    });
  }
  if (!found) throw std::runtime_error("no generator found for ideal " + str());
  OElt g = canonical_associate(*found);
  std::lock_guard<std::mutex> lk(g_gen_mutex);
  gen_cache().emplace(h_, g);
  return g;
}

std::string Ideal::str() const {
  std::string s = "[";
  for (int i = 0; i < 3; ++i) {
    s += "[";
    for (int j = 0; j < 3; ++j) s += std::to_string(h_[i][j]) + (j < 2 ? "," : "");
    s += i < 2 ? "]," : "]";
  }
  return s + "]";
}

OElt canonical_associate(const OElt& g) {
  if (g.is_zero()) throw std::domain_error("canonical_associate(0)");
  const double l1 = std::log(-kRealRoot);
  const double l2 = -l1 / 2;
  double L1 = std::log(std::fabs(g.real()));
  double L2 = std::log(std::abs(g.cplx()));
  double kstar = (L2 - L1) / (l1 - l2);
  int k0 = static_cast<int>(std::floor(kstar)) - 1;
  std::vector<std::pair<double, OElt>> cand;
  for (int k = k0; k <= k0 + 3; ++k) {
    OElt h = eps_pow(k) * g;
    int lead = h[0] != 0 ? 0 : (h[1] != 0 ? 1 : 2);
    if (h[lead] < 0) h = -h;
    cand.push_back({std::max(std::fabs(h.real()), std::abs(h.cplx())), h});
  }
  double m = cand[0].first;
  for (const auto& c : cand) m = std::min(m, c.first);
  std::optional<OElt> best;
  for (const auto& c : cand)
    if (c.first <= m * (1 + 1e-12) && (!best || c.second < *best)) best = c.second;
  return *best;
}

// ---------------- primes

Int PrimeIdeal::norm() const {
  Int n = 1;
  for (int i = 0; i < degree; ++i) n = mul_ck(n, p);
  return n;
}

std::vector<PrimeIdeal> factor_rational_prime(Int p) {
  static std::map<Int, std::vector<PrimeIdeal>> cache;
  {
    std::lock_guard<std::mutex> lk(g_prime_mutex);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  if (!is_prime(p)) throw std::domain_error("factor_rational_prime: not prime");
  std::vector<PrimeIdeal> out;
  auto roots = roots_mod(p);
  auto make = [&](const Poly& g, int deg, int e) {
    PrimeIdeal P;
    P.p = p;
    P.degree = deg;
    P.ram = e;
    P.poly = g;
    P.ideal = deg == 3 ? Ideal::principal(OElt(p)) : Ideal::from_generators({OElt(p), poly_to_oelt(g)});
    if (deg == 3) {
      P.gen = OElt(p);
    } else if (deg == 2 && !out.empty() && static_cast<Int128>(p) * p > INT64_MAX / 4) {
      // (p) = P Q with P of degree 1 already built; the lattice search cannot handle this norm
      P.gen = canonical_associate(*OElt(p).divide(out[0].gen));
    } else {
      P.gen = P.ideal.generator();
    }
    out.push_back(P);
  };
  if (roots.empty()) {
    make(min_poly_mod(p), 3, 1);
  } else if (roots.size() == 1 && roots[0].second == 1) {
    Poly lin{mod_pos(-roots[0].first, p), 1};
    make(lin, 1, 1);
    make(poly_divexact(min_poly_mod(p), lin, p), 2, 1);
  } else {
    for (auto [r, m] : roots) make({mod_pos(-r, p), 1}, 1, m);
  }
  std::sort(out.begin(), out.end());
  std::lock_guard<std::mutex> lk(g_prime_mutex);
  cache[p] = out;
  return out;
}

int valuation(const OElt& x, const PrimeIdeal& P) {
  if (x.is_zero()) throw std::domain_error("valuation of zero");
  int v = 0;
  OElt y = x;
  if (P.degree == 3) {
    while (y.divisible_by(P.p)) {
      y = y.div_exact(P.p);
      ++v;
    }
    return v;
  }
  for (;;) {
    auto q = y.divide(P.gen);
    if (!q) return v;
    y = *q;
    ++v;
  }
}

int valuation(const Ideal& a, const PrimeIdeal& P) {
  int v = 0;
  Ideal b = a;
  while (P.ideal.divides(b)) {
    b = b.divide_by(P.gen);
    ++v;
  }
  return v;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Ideal& a) {
  std::vector<std::pair<PrimeIdeal, int>> out;
  for (auto [l, e] : factor_integer(a.norm())) {
    (void)e;
    for (const auto& P : factor_rational_prime(l)) {
      int v = valuation(a, P);
      if (v > 0) out.push_back({P, v});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::vector<PrimeIdeal> primes_up_to(Int bound) {
  std::vector<PrimeIdeal> out;
  for (Int l = 2; l <= bound; ++l) {
    if (!is_prime(l)) continue;
    for (const auto& P : factor_rational_prime(l))
      if (P.norm() <= bound) out.push_back(P);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Ideal> ideals_up_to(Int bound) {
  auto primes = primes_up_to(bound);
  std::vector<Ideal> out;
  std::function<void(std::size_t, const Ideal&)> rec = [&](std::size_t start, const Ideal& cur) {
    out.push_back(cur);
    for (std::size_t i = start; i < primes.size(); ++i) {
      if (cur.norm() * primes[i].norm() > bound) continue;
      Ideal nxt = cur;
      while (nxt.norm() * primes[i].norm() <= bound) {
        nxt = nxt * primes[i].ideal;
        rec(i + 1, nxt);
      }
    }
  };
  rec(0, Ideal::unit());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------- residue fields

ResidueField::ResidueField(const PrimeIdeal& P) : p_(P.p), f_(P.degree), q_(P.norm()) {
  for (int i = 0; i < f_; ++i) g_[i] = mod_pos(P.poly[i], p_);
  if (f_ == 1) root_ = mod_pos(-P.poly[0], p_);
}

ResidueField::Elem ResidueField::reduce(const OElt& x) const {
  if (f_ == 1) {
    Int128 r = root_;
    Int128 v = (mod_pos(x[2], p_) * r + mod_pos(x[1], p_)) % p_;
    v = (v * r + mod_pos(x[0], p_)) % p_;
    return {static_cast<Int>(v), 0, 0};
  }
  Elem a{mod_pos(x[0], p_), mod_pos(x[1], p_), mod_pos(x[2], p_)};
  if (f_ == 2 && a[2] != 0) {
    // x^2 = -(g0 + g1 x)
    Int c = a[2];
    a[2] = 0;
    a[0] = mod_pos(static_cast<Int>((a[0] - static_cast<Int128>(c) * g_[0]) % p_), p_);
    a[1] = mod_pos(static_cast<Int>((a[1] - static_cast<Int128>(c) * g_[1]) % p_), p_);
  }
  return a;
}

ResidueField::Elem ResidueField::element(Int idx) const {
  Elem a{0, 0, 0};
  for (int i = 0; i < f_; ++i) {
    a[i] = idx % p_;
    idx /= p_;
  }
  return a;
}

ResidueField::Elem ResidueField::add(const Elem& a, const Elem& b) const {
  return {(a[0] + b[0]) % p_, (a[1] + b[1]) % p_, (a[2] + b[2]) % p_};
}
ResidueField::Elem ResidueField::sub(const Elem& a, const Elem& b) const {
  return {mod_pos(a[0] - b[0], p_), mod_pos(a[1] - b[1], p_), mod_pos(a[2] - b[2], p_)};
}
ResidueField::Elem ResidueField::neg(const Elem& a) const { return sub({0, 0, 0}, a); }

ResidueField::Elem ResidueField::mul(const Elem& a, const Elem& b) const {
  if (f_ == 1) return {static_cast<Int>(static_cast<Int128>(a[0]) * b[0] % p_), 0, 0};
  Int128 r[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < f_; ++i)
    for (int j = 0; j < f_; ++j) r[i + j] = (r[i + j] + static_cast<Int128>(a[i]) * b[j]) % p_;
  for (int d = 2 * f_ - 2; d >= f_; --d) {
    Int128 c = r[d];
    if (c == 0) continue;
    r[d] = 0;
    for (int i = 0; i < f_; ++i) r[d - f_ + i] = ((r[d - f_ + i] - c * g_[i]) % p_ + p_) % p_;
  }
  return {static_cast<Int>(r[0]), static_cast<Int>(r[1]), static_cast<Int>(r[2])};
}

ResidueField::Elem ResidueField::pow(Elem a, Int e) const {
  Elem r = from_int(1);
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

ResidueField::Elem ResidueField::inv(const Elem& a) const {
  if (is_zero(a)) throw std::domain_error("residue field: inverse of zero");
  return pow(a, q_ - 2);
}

bool ResidueField::is_square(const Elem& a) const {
  if (p_ == 2 || is_zero(a)) return true;
  return pow(a, (q_ - 1) / 2) == from_int(1);
}

ResidueField::Elem ResidueField::sqrt(const Elem& a) const {
  if (p_ == 2) return pow(a, q_ / 2);
  if (q_ > 4000000) throw std::domain_error("residue field sqrt: field too large for search");
  for (Int i = 0; i < q_; ++i) {
    Elem x = element(i);
    if (mul(x, x) == a) return x;
  }
  throw std::domain_error("residue field sqrt: not a square");
}

ResidueField::Elem ResidueField::cbrt(const Elem& a) const {
  if (p_ != 3) throw std::domain_error("cbrt only in characteristic 3");
  return pow(a, q_ / 3);
}

}  // namespace koecher
