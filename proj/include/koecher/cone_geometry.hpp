#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "koecher/number_field.hpp"

namespace koecher {

/// Column vector in O^2.
using Vec2 = std::array<OElt, 2>;

struct Vec2Hash {
  std::size_t operator()(const Vec2& v) const { return OEltHash()(v[0]) * 31u ^ OEltHash()(v[1]); }
};

/// 2x2 matrix over O, [[a, b], [c, d]].
struct Mat2 {
  OElt a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {}; }
  static Mat2 from_columns(const Vec2& x, const Vec2& y) { return {x[0], y[0], x[1], y[1]}; }
  Vec2 col(int j) const { return j == 0 ? Vec2{a, c} : Vec2{b, d}; }
  OElt det() const { return a * d - b * c; }
  bool is_invertible() const { return det().is_unit(); }
  /// Inverse in GL2(O); throws unless det is a unit.
  Mat2 inverse() const;
  /// adj(M) = det(M) M^{-1}.
  Mat2 adjugate() const { return {d, -b, -c, a}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }

  friend Vec2 operator*(const Mat2& m, const Vec2& v) { return {m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1]}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2& x, const Mat2& y) {
    return std::tie(x.a, x.b, x.c, x.d) <=> std::tie(y.a, y.b, y.c, y.d);
  }
  std::string str() const;
};

inline OElt det2(const Vec2& x, const Vec2& y) { return x[0] * y[1] - x[1] * y[0]; }
inline Vec2 operator-(const Vec2& v) { return {-v[0], -v[1]}; }
inline Vec2 operator+(const Vec2& x, const Vec2& y) { return {x[0] + y[0], x[1] + y[1]}; }
inline Vec2 scale(const OElt& s, const Vec2& v) { return {s * v[0], s * v[1]}; }
inline bool is_zero(const Vec2& v) { return v[0].is_zero() && v[1].is_zero(); }

/// Coordinates in the Z-basis e1, t e1, t^2 e1, e2, t e2, t^2 e2.
std::array<Int, 6> coords(const Vec2& v);
Vec2 from_coords(const std::array<Int, 6>& c);

/// Representative of the class {v, -v}: first nonzero coordinate positive.
Vec2 sign_normalize(const Vec2& v);
bool same_up_to_sign(const Vec2& x, const Vec2& y);
/// v divided by the gcd of its six coordinates.
Vec2 primitive_part(const Vec2& v);
/// The point of D closest to the origin on the ray of q(v), as a sign-normalized vector.
Vec2 spanning_point(const Vec2& v);
/// |N(det(R(x), R(y)))|.
Int128 size(const Vec2& x, const Vec2& y);
/// y = u x for a unit u (+-eps^k), returning k with the sign.
std::optional<UnitLog> unit_ratio(const Vec2& x, const Vec2& y);

std::string vec_str(const Vec2& v);
Vec2 parse_vec(const std::string& s);

/// Points of V = Sym2(R) x Herm2(C) in the exact model F^7: a rank-one point q(x) has coordinates
/// (a^2, 2ab, b^2, a^#, a x b, w(a, b), b^#) for x = (a, b), and a form y in F^7 pairs with it as
/// the real embedding of the dot product.
using Point = std::array<OElt, 7>;
using Form = std::array<FElt, 7>;

Point rank_one(const Vec2& x);
Point operator+(const Point& p, const Point& q);
FElt pairing(const Point& p, const Form& y);
double pairing_approx(const Point& p, const std::array<double, 7>& y);
inline FElt evaluate(const Form& y, const Vec2& x) { return pairing(rank_one(x), y); }

/// The point q(x) read as a form: evaluate(dual_form(x), z) = <q(z), q(x)>.
Form dual_form(const Vec2& x);
/// <q(z), q(x)> computed directly from the embeddings' algebra.
OElt rank_one_inner(const Vec2& z, const Vec2& x);

/// sum_v c_v Tr(x_v x_v^*) with c_v = 1, 2: the standard form on both places.
Form identity_form();
std::array<double, 7> embed(const Form& y);
/// Form values at basis vectors.  Gram(y)[i][j] is the bilinear form in the Z-basis of coords().
std::array<std::array<FElt, 6>, 6> gram(const Form& y);
std::vector<std::vector<double>> gram_approx(const Form& y);
bool is_positive_definite(const Form& y);
/// Rank of span{q(x)} over R (equal to the F-rank of the coordinate vectors).
int rank_of_points(const std::vector<Vec2>& xs);

/// Matrix of the linear map on F^7 induced by g on rank-one points: rank_one(g x) = L(g) rank_one(x).
using Linear7 = std::array<std::array<FElt, 7>, 7>;
Linear7 point_action(const Mat2& g);
/// Form pulled back along g: evaluate(pullback(y, g), x) = evaluate(y, g x).
Form pullback(const Form& y, const Mat2& g);

std::string form_str(const Form& y);

}  // namespace koecher

namespace koecher {

/// (x, y) with x a + y b = 1; throws if a, b are not coprime.
std::pair<OElt, OElt> bezout(const OElt& a, const OElt& b);
/// Some matrix in SL2(O) with first column p; p must be unimodular.
Mat2 completion(const Vec2& p);
/// Generator of the ideal (v0, v1) and v divided by it.
std::pair<OElt, Vec2> split_content(const Vec2& v);

}  // namespace koecher
