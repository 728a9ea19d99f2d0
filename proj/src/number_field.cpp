#include "koecher/number_field.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace koecher {

namespace {

// Coefficients of a*b before narrowing.
template <class T>
std::array<T, 3> mul_raw(const T& a0, const T& a1, const T& a2, const T& b0, const T& b1, const T& b2) {
  T p0 = a0 * b0;
  T p1 = a0 * b1 + a1 * b0;
  T p2 = a0 * b2 + a1 * b1 + a2 * b0;
  T p3 = a1 * b2 + a2 * b1;
  T p4 = a2 * b2;
  return {p0 - p3 - p4, p1 - p4, p2 + p3 + p4};
}

// Regular representation: columns are x, x*t, x*t^2.
template <class T>
std::array<std::array<T, 3>, 3> mult_matrix(const T& a0, const T& a1, const T& a2) {
  return {{{a0, -a2, -(a1 + a2)}, {a1, a0, -a2}, {a2, a1 + a2, a0 + a1 + a2}}};
}

template <class T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class T>
std::array<T, 3> adj_col(const std::array<std::array<T, 3>, 3>& m) {
  return {m[1][1] * m[2][2] - m[1][2] * m[2][1], -(m[1][0] * m[2][2] - m[1][2] * m[2][0]),
          m[1][0] * m[2][1] - m[1][1] * m[2][0]};
}

const std::complex<double> kZ{kComplexRootRe, kComplexRootIm};

std::string coeff_str(const std::array<std::string, 3>& c) {
  std::string out;
  for (int i = 2; i >= 0; --i) {
    const std::string& s = c[i];
    if (s == "0") continue;
    bool neg = s[0] == '-';
    std::string mag = neg ? s.substr(1) : s;
    if (!out.empty()) out += neg ? "-" : "+";
    else if (neg) out += "-";
    if (i == 0) {
      out += mag;
    } else {
      if (mag != "1") out += mag + "*";
      out += i == 1 ? "t" : "t^2";
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace

OElt& OElt::operator+=(const OElt& o) {
  for (int i = 0; i < 3; ++i) c_[i] = add_ck(c_[i], o.c_[i]);
  return *this;
}
OElt& OElt::operator-=(const OElt& o) {
  for (int i = 0; i < 3; ++i) c_[i] = sub_ck(c_[i], o.c_[i]);
  return *this;
}

OElt operator*(const OElt& a, const OElt& b) {
  auto r = mul_raw<Int128>(a.c_[0], a.c_[1], a.c_[2], b.c_[0], b.c_[1], b.c_[2]);
  return {narrow(r[0]), narrow(r[1]), narrow(r[2])};
}

Int128 OElt::norm() const {
  return det3(mult_matrix<Int128>(c_[0], c_[1], c_[2]));
}

Int OElt::trace() const { return add_ck(add_ck(mul_ck(3, c_[0]), c_[1]), c_[2]); }

OElt OElt::adjugate() const {
  auto v = adj_col(mult_matrix<Int128>(c_[0], c_[1], c_[2]));
  return {narrow(v[0]), narrow(v[1]), narrow(v[2])};
}

std::optional<OElt> OElt::divide(const OElt& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero");
  Int128 n = d.norm();
  auto da = adj_col(mult_matrix<Int128>(d.c_[0], d.c_[1], d.c_[2]));
  auto p = mul_raw<Int128>(c_[0], c_[1], c_[2], da[0], da[1], da[2]);
  if (p[0] % n != 0 || p[1] % n != 0 || p[2] % n != 0) return std::nullopt;
  return OElt{narrow(p[0] / n), narrow(p[1] / n), narrow(p[2] / n)};
}

OElt OElt::pow(int e) const {
  if (e < 0) throw std::domain_error("negative power of integral element");
  OElt r = 1, b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

double OElt::real() const {
  return static_cast<double>(c_[0]) + kRealRoot * (static_cast<double>(c_[1]) + kRealRoot * static_cast<double>(c_[2]));
}

std::complex<double> OElt::cplx() const {
  return static_cast<double>(c_[0]) + kZ * (static_cast<double>(c_[1]) + kZ * static_cast<double>(c_[2]));
}

std::optional<OElt> nearest_integral(double real, std::complex<double> cplx) {
  // c0 + c1 s + c2 s^2 at the real root and at the complex root.
  double m[3][4] = {{1, kRealRoot, kRealRoot * kRealRoot, real},
                    {1, kZ.real(), (kZ * kZ).real(), cplx.real()},
                    {0, kZ.imag(), (kZ * kZ).imag(), cplx.imag()}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(m[row][col]) > std::fabs(m[piv][col])) piv = row;
    for (int j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
    for (int row = 0; row < 3; ++row) {
      if (row == col) continue;
      double f = m[row][col] / m[col][col];
      for (int j = 0; j < 4; ++j) m[row][j] -= f * m[col][j];
    }
  }
  std::array<Int, 3> c{};
  for (int i = 0; i < 3; ++i) {
    double v = m[i][3] / m[i][i];
    if (!std::isfinite(v) || std::fabs(v) > 1e15) return std::nullopt;
    c[i] = std::llround(v);
  }
  return OElt(c[0], c[1], c[2]);
}

int OElt::real_sign() const {
  double v = real();
  double bound = 8e-16 * (std::fabs(double(c_[0])) + std::fabs(double(c_[1])) + std::fabs(double(c_[2]))) + 1e-300;
  if (v > bound) return 1;
  if (v < -bound) return -1;
  return real_sign_exact(mpq_class(c_[0]), mpq_class(c_[1]), mpq_class(c_[2]));
}

std::string OElt::str() const {
  return coeff_str({std::to_string(c_[0]), std::to_string(c_[1]), std::to_string(c_[2])});
}

OElt OElt::parse(std::string_view s) {
  std::string buf;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) buf += ch;
  if (buf.empty()) throw std::invalid_argument("empty element string");
  OElt acc;
  std::size_t i = 0;
  while (i < buf.size()) {
    int sign = 1;
    if (buf[i] == '+' || buf[i] == '-') {
      sign = buf[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < buf.size() && std::isdigit(static_cast<unsigned char>(buf[j]))) ++j;
    Int coef = 1;
    bool has_coef = j > i;
    if (has_coef) coef = std::stoll(buf.substr(i, j - i));
    i = j;
    int power = 0;
    if (i < buf.size() && buf[i] == '*') ++i;
    if (i < buf.size() && buf[i] == 't') {
      ++i;
      power = 1;
      if (i < buf.size() && buf[i] == '^') {
        ++i;
        std::size_t k = i;
        while (k < buf.size() && std::isdigit(static_cast<unsigned char>(buf[k]))) ++k;
        if (k == i) throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
        power = std::stoi(buf.substr(i, k - i));
        i = k;
      }
    } else if (!has_coef) {
      throw std::invalid_argument("cannot parse element '" + std::string(s) + "'");
    }
    if (i < buf.size() && buf[i] != '+' && buf[i] != '-') throw std::invalid_argument("cannot parse element '" + std::string(s) + "'");
    acc += (sign * coef) * OElt::t().pow(power);
  }
  return acc;
}

OElt eps_pow(int k) { return k >= 0 ? OElt::eps().pow(k) : OElt::eps_inv().pow(-k); }

UnitLog unit_log(const OElt& u) {
  if (!u.is_unit()) throw std::domain_error("unit_log: " + u.str() + " is not a unit");
  double r = std::log(std::fabs(u.real())) / std::log(-kRealRoot);
  int k0 = static_cast<int>(std::lround(r));
  for (int k : {k0, k0 - 1, k0 + 1}) {
    OElt e = eps_pow(k);
    if (e == u) return {1, k};
    if (-e == u) return {-1, k};
  }
  throw std::logic_error("unit_log failed for " + u.str());
}

// ---- FElt

bool FElt::is_integral() const {
  for (const auto& c : c_)
    if (c.get_den() != 1) return false;
  return true;
}

OElt FElt::to_oelt() const {
  if (!is_integral()) throw std::domain_error("element " + str() + " is not integral");
  return {narrow(c_[0].get_num()), narrow(c_[1].get_num()), narrow(c_[2].get_num())};
}

mpz_class FElt::denominator() const {
  mpz_class d = 1;
  for (const auto& c : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
  return d;
}

FElt& FElt::operator+=(const FElt& o) {
  for (int i = 0; i < 3; ++i) c_[i] += o.c_[i];
  return *this;
}
FElt& FElt::operator-=(const FElt& o) {
  for (int i = 0; i < 3; ++i) c_[i] -= o.c_[i];
  return *this;
}

FElt operator*(const FElt& a, const FElt& b) {
  auto r = mul_raw<mpq_class>(a.c_[0], a.c_[1], a.c_[2], b.c_[0], b.c_[1], b.c_[2]);
  return {r[0], r[1], r[2]};
}

mpq_class FElt::norm() const { return det3(mult_matrix<mpq_class>(c_[0], c_[1], c_[2])); }
mpq_class FElt::trace() const { return 3 * c_[0] + c_[1] + c_[2]; }

FElt FElt::adjugate() const {
  auto v = adj_col(mult_matrix<mpq_class>(c_[0], c_[1], c_[2]));
  return {v[0], v[1], v[2]};
}

FElt FElt::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw std::domain_error("inverse of zero");
  FElt a = adjugate();
  for (int i = 0; i < 3; ++i) a.c_[i] /= n;
  return a;
}

double FElt::real() const {
  return c_[0].get_d() + kRealRoot * (c_[1].get_d() + kRealRoot * c_[2].get_d());
}

std::complex<double> FElt::cplx() const {
  return c_[0].get_d() + kZ * (c_[1].get_d() + kZ * c_[2].get_d());
}

int FElt::real_sign() const {
  double a0 = c_[0].get_d(), a1 = c_[1].get_d(), a2 = c_[2].get_d();
  double scale = std::fabs(a0) + std::fabs(a1) + std::fabs(a2);
  if (std::isfinite(scale) && scale > 1e-250 && scale < 1e250) {
    double v = a0 + kRealRoot * (a1 + kRealRoot * a2);
    double bound = 1e-14 * scale;
    if (v > bound) return 1;
    if (v < -bound) return -1;
  }
  return real_sign_exact(c_[0], c_[1], c_[2]);
}

std::string FElt::str() const { return coeff_str({c_[0].get_str(), c_[1].get_str(), c_[2].get_str()}); }

int real_sign_exact(const mpq_class& c0, const mpq_class& c1, const mpq_class& c2) {
  if (sgn(c0) == 0 && sgn(c1) == 0 && sgn(c2) == 0) return 0;
  auto f = [](const mpq_class& x) -> mpq_class { return x * x * x - x * x + 1; };
  auto g = [&](const mpq_class& x) -> mpq_class { return c0 + c1 * x + c2 * x * x; };
  // f(lo) < 0 < f(hi)
  mpq_class lo(-7549, 10000), hi(-7548, 10000);
  for (int iter = 0; iter < 4000; ++iter) {
    mpq_class glo = g(lo), ghi = g(hi);
    mpq_class mn = glo < ghi ? glo : ghi, mx = glo < ghi ? ghi : glo;
    if (sgn(c2) != 0) {
      mpq_class v = -c1 / (2 * c2);
      if (v > lo && v < hi) {
        mpq_class gv = g(v);
        if (gv < mn) mn = gv;
        if (gv > mx) mx = gv;
      }
    }
    if (sgn(mn) > 0) return 1;
    if (sgn(mx) < 0) return -1;
    mpq_class mid = (lo + hi) / 2;
    if (sgn(f(mid)) < 0) lo = mid;
    else hi = mid;
  }
  throw std::logic_error("real_sign_exact did not converge");
}

}  // namespace koecher
