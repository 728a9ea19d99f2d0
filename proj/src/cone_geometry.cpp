#include "koecher/cone_geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "koecher/field_linalg.hpp"

namespace koecher {

Mat2 Mat2::inverse() const {
  OElt dt = det();
  if (!dt.is_unit()) throw std::domain_error("matrix not in GL2(O): " + str());
  OElt di = dt.adjugate();
  if (dt.norm() < 0) di = -di;
  return {di * d, -(di * b), -(di * c), di * a};
}

std::string Mat2::str() const {
  return "[[" + a.str() + ", " + b.str() + "], [" + c.str() + ", " + d.str() + "]]";
}

std::array<Int, 6> coords(const Vec2& v) {
  return {v[0][0], v[0][1], v[0][2], v[1][0], v[1][1], v[1][2]};
}

Vec2 from_coords(const std::array<Int, 6>& c) { return {OElt(c[0], c[1], c[2]), OElt(c[3], c[4], c[5])}; }

Vec2 sign_normalize(const Vec2& v) {
  for (Int c : coords(v)) {
    if (c > 0) return v;
    if (c < 0) return -v;
  }
  return v;
}

bool same_up_to_sign(const Vec2& x, const Vec2& y) { return x == y || x == -y; }

Vec2 primitive_part(const Vec2& v) {
  Int g = gcd_int(v[0].content(), v[1].content());
  if (g == 0) throw std::domain_error("zero vector has no spanning point");
  return {v[0].div_exact(g), v[1].div_exact(g)};
}

Vec2 spanning_point(const Vec2& v) { return sign_normalize(primitive_part(v)); }

Int128 size(const Vec2& x, const Vec2& y) {
  Int128 n = det2(primitive_part(x), primitive_part(y)).norm();
  return n < 0 ? -n : n;
}

std::optional<UnitLog> unit_ratio(const Vec2& x, const Vec2& y) {
  int i = x[0].is_zero() ? 1 : 0;
  if (x[i].is_zero() || !det2(x, y).is_zero()) return std::nullopt;
  auto u = y[i].divide(x[i]);
  if (!u || !u->is_unit()) return std::nullopt;
  return unit_log(*u);
}

std::string vec_str(const Vec2& v) { return "(" + v[0].str() + ", " + v[1].str() + ")"; }

Vec2 parse_vec(const std::string& s) {
  std::string body = s;
  if (!body.empty() && body.front() == '(') body = body.substr(1);
  if (!body.empty() && body.back() == ')') body.pop_back();
  auto comma = body.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("expected (a, b): " + s);
  return {OElt::parse(body.substr(0, comma)), OElt::parse(body.substr(comma + 1))};
}

namespace {

// Imaginary part of sigma_2(a) conj(sigma_2(b)), up to a fixed real constant.
OElt alternating(const OElt& a, const OElt& b) {
  auto dl = [&](int i, int j) { return sub_ck(mul_ck(a[i], b[j]), mul_ck(a[j], b[i])); };
  Int d01 = dl(0, 1), d02 = dl(0, 2), d12 = dl(1, 2);
  return {add_ck(d01, d02), sub_ck(-d02, d12), d12};
}

}  // namespace

Point rank_one(const Vec2& x) {
  const OElt& a = x[0];
  const OElt& b = x[1];
  OElt an = a.adjugate(), bn = b.adjugate();
  return {a * a, 2 * (a * b), b * b, an, (a + b).adjugate() - an - bn, alternating(a, b), bn};
}

Point operator+(const Point& p, const Point& q) {
  Point r;
  for (int i = 0; i < 7; ++i) r[i] = p[i] + q[i];
  return r;
}

FElt pairing(const Point& p, const Form& y) {
  FElt s;
  for (int i = 0; i < 7; ++i)
    if (!p[i].is_zero() && !y[i].is_zero()) s += FElt(p[i]) * y[i];
  return s;
}

double pairing_approx(const Point& p, const std::array<double, 7>& y) {
  double s = 0;
  for (int i = 0; i < 7; ++i) s += p[i].real() * y[i];
  return s;
}

Form identity_form() { return {FElt(1), FElt(0), FElt(1), FElt(2), FElt(0), FElt(0), FElt(2)}; }

std::array<double, 7> embed(const Form& y) {
  std::array<double, 7> r;
  for (int i = 0; i < 7; ++i) r[i] = y[i].real();
  return r;
}

namespace {

Vec2 basis_vec(int i) {
  std::array<Int, 6> c{};
  c[i] = 1;
  return from_coords(c);
}

// Polarized rank-one coordinates: 2 B(e_i, e_j) = pol[i][j] . y
const std::array<std::array<Point, 6>, 6>& polarization() {
  static const auto table = [] {
    std::array<std::array<Point, 6>, 6> t;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        Point s = rank_one(basis_vec(i) + basis_vec(j));
        Point a = rank_one(basis_vec(i)), b = rank_one(basis_vec(j));
        for (int k = 0; k < 7; ++k) t[i][j][k] = s[k] - a[k] - b[k];
      }
    return t;
  }();
  return table;
}

}  // namespace

std::array<std::array<FElt, 6>, 6> gram(const Form& y) {
  std::array<std::array<FElt, 6>, 6> g;
  const auto& pol = polarization();
  const FElt half(mpq_class(1, 2));
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) g[i][j] = g[j][i] = pairing(pol[i][j], y) * half;
  return g;
}

std::vector<std::vector<double>> gram_approx(const Form& y) {
  auto ye = embed(y);
  const auto& pol = polarization();
  std::vector<std::vector<double>> g(6, std::vector<double>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) g[i][j] = g[j][i] = 0.5 * pairing_approx(pol[i][j], ye);
  return g;
}

bool is_positive_definite(const Form& y) {
  auto g = gram(y);
  for (int k = 0; k < 6; ++k) {
    if (g[k][k].real_sign() <= 0) return false;
    FElt inv = g[k][k].inverse();
    for (int i = k + 1; i < 6; ++i) {
      if (g[i][k].is_zero()) continue;
      FElt f = g[i][k] * inv;
      for (int j = k + 1; j < 6; ++j) g[i][j] -= f * g[k][j];
    }
  }
  return true;
}

int rank_of_points(const std::vector<Vec2>& xs) {
  std::vector<std::vector<FElt>> rows;
  for (const auto& x : xs) {
    Point p = rank_one(x);
    rows.emplace_back(p.begin(), p.end());
  }
  if (rows.empty()) return 0;
  return static_cast<int>(rank_of(rows));
}

namespace {

// Seven vectors whose rank-one points form a basis of F^7, and the inverse of that basis matrix.
struct PointBasis {
  std::array<Vec2, 7> vecs;
  std::array<std::array<FElt, 7>, 7> inv;  // inv * [rank_one(vecs[k]) as columns] = I
};

const PointBasis& point_basis() {
  static const PointBasis pb = [] {
    PointBasis b;
    b.vecs = {Vec2{1, 0}, Vec2{0, 1}, Vec2{1, 1}, Vec2{OElt::t(), 0}, Vec2{0, OElt::t()}, Vec2{1, OElt::t()},
              Vec2{OElt::t(), 1}};
    std::vector<std::vector<FElt>> aug(7, std::vector<FElt>(14, FElt(0)));
    for (int k = 0; k < 7; ++k) {
      Point p = rank_one(b.vecs[k]);
      for (int i = 0; i < 7; ++i) aug[i][k] = FElt(p[i]);
      aug[k][7 + k] = FElt(1);
    }
    auto e = row_reduce(std::move(aug));
    if (e.pivots.size() != 7 || e.pivots[6] != 6) throw std::logic_error("rank-one basis is singular");
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) b.inv[i][j] = e.rows[i][7 + j];
    return b;
  }();
  return pb;
}

}  // namespace

Linear7 point_action(const Mat2& g) {
  const auto& pb = point_basis();
  std::array<Point, 7> img;
  for (int k = 0; k < 7; ++k) img[k] = rank_one(g * pb.vecs[k]);
  Linear7 l;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      FElt s;
      for (int k = 0; k < 7; ++k)
        if (!img[k][i].is_zero() && !pb.inv[k][j].is_zero()) s += FElt(img[k][i]) * pb.inv[k][j];
      l[i][j] = s;
    }
  return l;
}

OElt rank_one_inner(const Vec2& z, const Vec2& x) {
  OElt a11 = x[0] * z[0], a22 = x[1] * z[1], a12 = x[0] * z[1], a21 = x[1] * z[0];
  OElt s = a11 + a22;
  OElt cross = (a12 + a21).adjugate() - a12.adjugate() - a21.adjugate();
  return s * s + 2 * (a11.adjugate() + a22.adjugate() + cross);
}

Form dual_form(const Vec2& x) {
  const auto& pb = point_basis();
  Form y;
  std::array<FElt, 7> v;
  for (int k = 0; k < 7; ++k) v[k] = FElt(rank_one_inner(pb.vecs[k], x));
  for (int j = 0; j < 7; ++j) {
    FElt s;
    for (int k = 0; k < 7; ++k)
      if (!pb.inv[k][j].is_zero()) s += pb.inv[k][j] * v[k];
    y[j] = s;
  }
  return y;
}

Form pullback(const Form& y, const Mat2& g) {
  Linear7 l = point_action(g);
  Form r;
  for (int j = 0; j < 7; ++j) {
    FElt s;
    for (int i = 0; i < 7; ++i)
      if (!l[i][j].is_zero() && !y[i].is_zero()) s += l[i][j] * y[i];
    r[j] = s;
  }
  return r;
}

std::string form_str(const Form& y) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 7; ++i) os << (i ? ", " : "") << y[i].str();
  os << "]";
  return os.str();
}

}  // namespace koecher

#include "koecher/ideal.hpp"
#include "koecher/zmatrix.hpp"

namespace koecher {

std::pair<OElt, OElt> bezout(const OElt& a, const OElt& b) {
  ZMat m;
  for (const OElt& g : {a, b})
    for (int k = 0; k < 3; ++k) {
      OElt r = g * OElt::t().pow(k);
      m.push_back({r[0], r[1], r[2]});
    }
  ZMat u;
  ZMat h = hermite_form(m, &u);
  if (h.size() != 3 || h[0][0] != 1 || h[1][1] != 1 || h[2][2] != 1 || h[0][1] != 0 || h[0][2] != 0)
    throw std::domain_error("bezout: elements are not coprime");
  // Shorten (x, y) by multiples of (b, -a), exactly: least squares in each embedding, rounded into O.
  FElt fx{mpq_class(u[0][0]), mpq_class(u[0][1]), mpq_class(u[0][2])};
  FElt fy{mpq_class(u[0][3]), mpq_class(u[0][4]), mpq_class(u[0][5])};
  const FElt fa(a), fb(b);
  const double na[2] = {a.real() * a.real(), std::norm(a.cplx())}, nb[2] = {b.real() * b.real(), std::norm(b.cplx())};
  for (int round = 0; round < 64; ++round) {
    std::complex<double> kr = (fy.real() * a.real() - fx.real() * b.real()) / (na[0] + nb[0]);
    std::complex<double> kc = (fy.cplx() * std::conj(a.cplx()) - fx.cplx() * std::conj(b.cplx())) / (na[1] + nb[1]);
    // very large multipliers are taken in steps of 2^shift
    int shift = 0;
    auto k = nearest_integral(kr.real(), kc);
    while (!k && shift < 900) {
      shift += 40;
      k = nearest_integral(std::ldexp(kr.real(), -shift), std::ldexp(1.0, -shift) * kc);
    }
    if (!k || k->is_zero()) break;
    FElt step = FElt(*k) * FElt(mpq_class(mpz_class(1) << shift));
    fx += step * fb;
    fy -= step * fa;
  }
  OElt x = fx.to_oelt(), y = fy.to_oelt();
  for (int iter = 0; iter < 64; ++iter) {
    bool improved = false;
    auto height = [](const OElt& p, const OElt& q) {
      double h = 0;
      for (int i = 0; i < 3; ++i) h += std::abs(static_cast<double>(p[i])) + std::abs(static_cast<double>(q[i]));
      return h;
    };
    double cur = height(x, y);
    for (int i = 0; i < 3 && !improved; ++i)
      for (Int s : {Int(1), Int(-1)}) {
        OElt k(0);
        k[i] = s;
        OElt nx = x + k * b, ny = y - k * a;
        if (height(nx, ny) < cur) {
          x = nx;
          y = ny;
          improved = true;
          break;
        }
      }
    if (!improved) break;
  }
  return {x, y};
}

Mat2 completion(const Vec2& p) {
  auto [x, y] = bezout(p[0], p[1]);
  return {p[0], -y, p[1], x};
}

std::pair<OElt, Vec2> split_content(const Vec2& v) {
  OElt g = Ideal::from_generators({v[0], v[1]}).generator();
  auto a = v[0].divide(g), b = v[1].divide(g);
  return {g, Vec2{*a, *b}};
}

}  // namespace koecher
