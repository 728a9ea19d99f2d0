#include "koecher/perfect_forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include "koecher/field_linalg.hpp"
#include "koecher/lattice.hpp"

namespace koecher {

namespace {

std::vector<FElt> point_row(const Vec2& x) {
  Point p = rank_one(x);
  return std::vector<FElt>(p.begin(), p.end());
}

Form add_scaled(const Form& y, const FElt& l, const Form& d) {
  Form r;
  for (int i = 0; i < 7; ++i) r[i] = y[i] + l * d[i];
  return r;
}

bool approx_positive_semidefinite(const std::vector<std::vector<double>>& g) {
  auto m = g;
  const int n = static_cast<int>(m.size());
  double scale = 0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::fabs(m[i][i]));
  for (int k = 0; k < n; ++k) {
    if (m[k][k] < -1e-9 * scale) return false;
    if (m[k][k] <= 1e-12 * scale) continue;
    for (int i = k + 1; i < n; ++i) {
      double f = m[i][k] / m[k][k];
      for (int j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

}  // namespace

MinimalVectors minimal_vectors(const Form& y) {
  if (!is_positive_definite(y)) throw std::domain_error("minimal_vectors: form is not positive definite");
  auto g = gram_approx(y);
  double bound = g[0][0];
  for (int i = 1; i < 6; ++i) bound = std::min(bound, g[i][i]);
  std::vector<std::pair<double, std::array<Int, 6>>> cand;
  double best = bound;
  enumerate_short_vectors(g, bound, [&](const std::vector<Int>& c, double v) {
    if (v <= best * (1 + 1e-7) + 1e-12) {
      best = std::min(best, v);
      std::array<Int, 6> a;
      std::copy(c.begin(), c.end(), a.begin());
      cand.emplace_back(v, a);
    }
    return true;
  });
  MinimalVectors mv;
  bool have = false;
  for (const auto& [v, c] : cand) {
    if (v > best * (1 + 1e-7) + 1e-12) continue;
    Vec2 x = sign_normalize(from_coords(c));
    FElt val = evaluate(y, x);
    int cmp = have ? val.real_compare(mv.min) : -1;
    if (cmp < 0) {
      mv.min = val;
      mv.vectors.clear();
      have = true;
    }
    if (cmp <= 0) mv.vectors.push_back(x);
  }
  if (!have) throw std::logic_error("minimal_vectors: enumeration found nothing");
  std::sort(mv.vectors.begin(), mv.vectors.end());
  return mv;
}

bool spans_space(const std::vector<Vec2>& vectors) { return rank_of_points(vectors) == 7; }

FElt flip_parameter(const Form& y, const Form& d) {
  FElt lam(1);
  const FElt one(1), half(mpq_class(1, 2)), two(2);
  std::optional<FElt> lo, hi;  // lo: definite without crossing; hi: not definite
  for (int guard = 0; guard < 400; ++guard) {
    Form yl = add_scaled(y, lam, d);
    if (!is_positive_definite(yl)) {
      hi = lam;
      lam = lo ? (*lo + lam) * half : lam * half;
      continue;
    }
    MinimalVectors mv = minimal_vectors(yl);
    std::optional<FElt> cross;
    for (const auto& x : mv.vectors) {
      FElt gx = evaluate(d, x);
      if (gx.real_sign() >= 0) continue;
      FElt l = (evaluate(y, x) - one) / (-gx);
      if (!cross || l.real_compare(*cross) < 0) cross = l;
    }
    if (!cross) {
      lo = lam;
      lam = hi ? (lam + *hi) * half : lam * two;
      continue;
    }
    if (*cross == lam) return lam;
    lam = *cross;
  }
  throw DeadEnd("flip_parameter: no vector reaches the minimum along the direction");
}

PerfectForm initial_perfect_form() {
  Form y = identity_form();
  MinimalVectors mv = minimal_vectors(y);
  FElt inv = mv.min.inverse();
  for (auto& c : y) c *= inv;
  std::vector<Vec2> vecs = mv.vectors;
  while (!spans_space(vecs)) {
    std::vector<std::vector<FElt>> rows;
    for (const auto& x : vecs) rows.push_back(point_row(x));
    auto ker = kernel_of(rows, 7);
    Form d;
    std::copy(ker[0].begin(), ker[0].end(), d.begin());
    if (approx_positive_semidefinite(gram_approx(d)))
      for (auto& c : d) c = -c;
    FElt lam;
    try {
      lam = flip_parameter(y, d);
    } catch (const DeadEnd&) {
      for (auto& c : d) c = -c;
      lam = flip_parameter(y, d);
    }
    y = add_scaled(y, lam, d);
    mv = minimal_vectors(y);
    if (!(mv.min == FElt(1))) throw std::logic_error("initial_perfect_form: minimum drifted");
    vecs = mv.vectors;
  }
  return {y, vecs};
}

std::vector<Facet> facets(const PerfectForm& p) {
  const int m = static_cast<int>(p.vectors.size());
  std::vector<std::vector<FElt>> rows;
  for (const auto& x : p.vectors) rows.push_back(point_row(x));
  std::vector<Facet> out;
  std::set<std::vector<int>> seen;
  std::vector<int> pick(6);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == 6) {
      std::vector<std::vector<FElt>> sub;
      for (int i : pick) sub.push_back(rows[i]);
      auto ker = kernel_of(sub, 7);
      if (ker.size() != 1) return;
      Form n;
      std::copy(ker[0].begin(), ker[0].end(), n.begin());
      std::vector<int> zero;
      int pos = 0, neg = 0;
      for (int i = 0; i < m; ++i) {
        int s = pairing(rank_one(p.vectors[i]), n).real_sign();
        if (s == 0) zero.push_back(i);
        else if (s > 0) ++pos;
        else ++neg;
      }
      if (pos && neg) return;
      if (!seen.insert(zero).second) return;
      if (neg)
        for (auto& c : n) c = -c;
      out.push_back({zero, n});
      return;
    }
    for (int i = start; i <= m - (6 - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

PerfectForm neighbor(const PerfectForm& p, const Facet& f) {
  FElt lam = flip_parameter(p.form, f.normal);
  Form y = add_scaled(p.form, lam, f.normal);
  MinimalVectors mv = minimal_vectors(y);
  if (!(mv.min == FElt(1))) throw std::logic_error("neighbor: minimum is not 1");
  if (!spans_space(mv.vectors)) throw std::logic_error("neighbor: result is not perfect");
  return {y, mv.vectors};
}

bool spans_plane(const std::vector<Vec2>& vectors) {
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j)
      if (!det2(vectors[i], vectors[j]).is_zero()) return true;
  return false;
}

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

std::vector<int> induced_permutation(const Mat2& g, const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  if (from.size() != to.size()) return {};
  std::vector<int> p(from.size(), -1);
  std::vector<bool> used(to.size(), false);
  for (std::size_t i = 0; i < from.size(); ++i) {
    Vec2 im = sign_normalize(g * from[i]);
    for (std::size_t j = 0; j < to.size(); ++j)
      if (!used[j] && sign_normalize(to[j]) == im) {
        p[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    if (p[i] < 0) return {};
  }
  return p;
}

namespace {

Int128 abs_norm(const OElt& x) {
  Int128 n = x.norm();
  return n < 0 ? -n : n;
}

// Candidate g with g a = c, g b = d.
std::optional<Mat2> frame_map(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  Mat2 src = Mat2::from_columns(a, b), dst = Mat2::from_columns(c, d);
  OElt dt = src.det();
  Mat2 num = dst * src.adjugate();
  auto qa = num.a.divide(dt), qb = num.b.divide(dt), qc = num.c.divide(dt), qd = num.d.divide(dt);
  if (!qa || !qb || !qc || !qd) return std::nullopt;
  Mat2 g{*qa, *qb, *qc, *qd};
  if (!g.is_invertible()) return std::nullopt;
  return g;
}

std::vector<Mat2> plane_equivalences(const std::vector<Vec2>& from, const std::vector<Vec2>& to, bool first_only) {
  std::vector<Mat2> out;
  if (from.size() != to.size()) return out;
  std::size_t ia = 0, ib = 0;
  Int128 best = -1;
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = i + 1; j < from.size(); ++j) {
      Int128 n = abs_norm(det2(from[i], from[j]));
      if (n != 0 && (best < 0 || n < best)) {
        best = n;
        ia = i;
        ib = j;
      }
    }
  if (best < 0) return out;
  std::unordered_set<Vec2, Vec2Hash> target;
  for (const auto& v : to) target.insert(sign_normalize(v));
  if (target.size() != to.size()) return out;
  std::set<Mat2> found;
  for (std::size_t i = 0; i < to.size(); ++i)
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (i == j || abs_norm(det2(to[i], to[j])) != best) continue;
      for (int s : {1, -1}) {
        auto g = frame_map(from[ia], from[ib], to[i], s > 0 ? to[j] : -to[j]);
        if (!g) continue;
        bool ok = true;
        for (const auto& v : from)
          if (!target.count(sign_normalize(*g * v))) {
            ok = false;
            break;
          }
        if (!ok) continue;
        found.insert(*g);
        found.insert(-*g);
        if (first_only) return {*g};
      }
    }
  return {found.begin(), found.end()};
}

// For sets on one line: the line direction (unimodular) and the coefficients.
std::pair<Vec2, std::vector<OElt>> line_coefficients(const std::vector<Vec2>& vs) {
  Vec2 p = split_content(vs[0]).second;
  int k = p[0].is_zero() ? 1 : 0;
  std::vector<OElt> c;
  for (const auto& v : vs) {
    auto q = v[k].divide(p[k]);
    if (!q) throw std::logic_error("line_coefficients: vector off the line");
    c.push_back(*q);
  }
  return {p, c};
}

}  // namespace

std::vector<Mat2> all_equivalences(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  return plane_equivalences(from, to, false);
}

std::optional<Mat2> find_equivalence(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  if (from.size() != to.size() || from.empty()) return std::nullopt;
  bool pf = spans_plane(from), pt = spans_plane(to);
  if (pf != pt) return std::nullopt;
  if (pf) {
    auto r = plane_equivalences(from, to, true);
    if (r.empty()) return std::nullopt;
    return r[0];
  }
  auto [p1, c1] = line_coefficients(from);
  auto [p2, c2] = line_coefficients(to);
  std::set<std::array<Int, 3>> target;
  for (const auto& c : c2) target.insert(c[0] > 0 || (c[0] == 0 && (c[1] > 0 || (c[1] == 0 && c[2] > 0))) ? c.coeffs() : (-c).coeffs());
  auto norm_sign = [](const OElt& c) {
    return c[0] > 0 || (c[0] == 0 && (c[1] > 0 || (c[1] == 0 && c[2] > 0))) ? c : -c;
  };
  for (const auto& d : c2) {
    auto u = d.divide(c1[0]);
    if (!u || !u->is_unit()) continue;
    bool ok = true;
    for (const auto& c : c1)
      if (!target.count(norm_sign(*u * c).coeffs())) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Mat2 g = completion(p2) * Mat2{*u, 0, 0, 1} * completion(p1).inverse();
    return g;
  }
  return std::nullopt;
}

std::optional<std::pair<int, Mat2>> FanDatabase::locate(const std::vector<Vec2>& vectors, int dim) const {
  if (dim < 1 || dim > 7) return std::nullopt;
  for (std::size_t i = 0; i < cones[dim].size(); ++i) {
    const auto& rep = cones[dim][i].vectors;
    if (rep.size() != vectors.size()) continue;
    if (auto g = find_equivalence(rep, vectors)) return std::make_pair(static_cast<int>(i), *g);
  }
  return std::nullopt;
}

std::vector<TopCone> voronoi_walk(int /*jobs*/) {
  std::vector<TopCone> reps;
  PerfectForm start = initial_perfect_form();
  reps.push_back({start, {}, {}});
  for (std::size_t i = 0; i < reps.size(); ++i) {
    reps[i].facets = facets(reps[i].perfect);
    const PerfectForm here = reps[i].perfect;
    const std::vector<Facet> fs = reps[i].facets;
    std::vector<TopCone::Neighbor> nbrs;
    for (const auto& f : fs) {
      PerfectForm nb = neighbor(here, f);
      std::optional<TopCone::Neighbor> hit;
      for (std::size_t j = 0; j < reps.size() && !hit; ++j)
        if (auto g = find_equivalence(reps[j].perfect.vectors, nb.vectors)) hit = TopCone::Neighbor{static_cast<int>(j), *g};
      if (!hit) {
        reps.push_back({nb, {}, {}});
        hit = TopCone::Neighbor{static_cast<int>(reps.size() - 1), Mat2::identity()};
      }
      nbrs.push_back(*hit);
    }
    reps[i].neighbors = std::move(nbrs);
  }
  return reps;
}

std::vector<std::vector<int>> face_lattice(const TopCone& t) {
  std::set<std::vector<int>> faces;
  std::vector<int> all(t.perfect.vectors.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  faces.insert(all);
  std::vector<std::vector<int>> frontier;
  for (const auto& f : t.facets)
    if (faces.insert(f.vertices).second) frontier.push_back(f.vertices);
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& f : t.facets) {
        std::vector<int> c;
        std::set_intersection(a.begin(), a.end(), f.vertices.begin(), f.vertices.end(), std::back_inserter(c));
        if (!c.empty() && faces.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  return {faces.begin(), faces.end()};
}

namespace {

// Choose a pleasant representative: a unimodular pair mapped to e1, e2, remaining vectors sorted.
std::vector<Vec2> normalize_rep(const std::vector<Vec2>& vs) {
  const Vec2 e1{1, 0}, e2{0, 1};
  std::optional<std::vector<Vec2>> best;
  if (!spans_plane(vs)) {
    if (vs.size() == 1) return {e1};
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Mat2 c = completion(split_content(vs[i]).second).inverse();
      std::vector<Vec2> img;
      for (const auto& v : vs) img.push_back(sign_normalize(c * v));
      std::vector<Vec2> rest;
      for (std::size_t k = 0; k < vs.size(); ++k)
        if (k != i) rest.push_back(img[k]);
      std::sort(rest.begin(), rest.end());
      rest.insert(rest.begin(), img[i]);
      if (!best || rest < *best) best = rest;
    }
    return *best;
  }
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (i == j) continue;
      Mat2 m = Mat2::from_columns(vs[i], vs[j]);
      if (!m.is_invertible()) continue;
      Mat2 g = m.inverse();
      std::vector<Vec2> rest;
      for (std::size_t k = 0; k < vs.size(); ++k)
        if (k != i && k != j) rest.push_back(sign_normalize(g * vs[k]));
      std::sort(rest.begin(), rest.end());
      rest.insert(rest.begin(), {e1, e2});
      auto height = [](const std::vector<Vec2>& r) {
        Int h = 0;
        for (const auto& v : r)
          for (Int c : coords(v)) h += c < 0 ? -c : c;
        return h;
      };
      if (!best || height(rest) < height(*best) || (height(rest) == height(*best) && rest < *best)) best = rest;
    }
  if (!best) {
    std::vector<Vec2> s = vs;
    std::sort(s.begin(), s.end());
    return s;
  }
  return *best;
}

int orientation_sign(const Mat2& h, const Cone& c) {
  if (static_cast<int>(c.vectors.size()) == c.dim) return permutation_sign(induced_permutation(h, c.vectors, c.vectors));
  if (c.dim != 7) throw std::logic_error("orientation of a non-simplicial cone below top dimension");
  Linear7 l = point_action(h);
  std::vector<std::vector<FElt>> m(7, std::vector<FElt>(7));
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) m[i][j] = l[i][j];
  return determinant(std::move(m)).real_sign();
}

}  // namespace

void complete_fan(FanDatabase& fan) {
  for (auto& v : fan.cones) v.clear();
  for (auto& v : fan.faces) v.clear();
  for (std::size_t t = 0; t < fan.top.size(); ++t) {
    const auto& top = fan.top[t];
    for (const auto& face : face_lattice(top)) {
      std::vector<Vec2> vs;
      for (int i : face) vs.push_back(top.perfect.vectors[i]);
      int dim = rank_of_points(vs);
      if (dim < 7 && dim != static_cast<int>(vs.size()))
        throw std::logic_error("complete_fan: non-simplicial cone of dimension " + std::to_string(dim));
      if (dim == 7) continue;
      if (fan.locate(vs, dim)) continue;
      Cone c;
      c.vectors = normalize_rep(vs);
      c.dim = dim;
      c.interior = spans_plane(vs);
      fan.cones[dim].push_back(std::move(c));
    }
  }
  for (const auto& top : fan.top) {
    Cone c;
    c.vectors = top.perfect.vectors;
    c.dim = 7;
    c.interior = true;
    fan.cones[7].push_back(std::move(c));
  }
  for (int k = 2; k <= 7; ++k)
    for (auto& c : fan.cones[k]) {
      if (!c.interior) continue;
      c.stabilizer = all_equivalences(c.vectors, c.vectors);
      c.character.clear();
      for (const auto& h : c.stabilizer) c.character.push_back(orientation_sign(h, c));
    }
  for (int k = 3; k <= 4; ++k)
    for (const auto& c : fan.cones[k]) {
      std::vector<FaceMap> maps;
      for (int i = 0; i < k; ++i) {
        std::vector<Vec2> tau;
        for (int j = 0; j < k; ++j)
          if (j != i) tau.push_back(c.vectors[j]);
        FaceMap fm;
        if (spans_plane(tau)) {
          auto loc = fan.locate(tau, k - 1);
          if (!loc) throw std::logic_error("complete_fan: facet of a cone is not in the census");
          fm.rep = loc->first;
          fm.g = loc->second;
          auto perm = induced_permutation(fm.g, fan.cones[k - 1][fm.rep].vectors, tau);
          fm.sign = permutation_sign(perm);
        }
        maps.push_back(fm);
      }
      fan.faces[k].push_back(std::move(maps));
    }
}

FanDatabase classify_fan(int jobs) {
  FanDatabase fan;
  fan.top = voronoi_walk(jobs);
  complete_fan(fan);
  return fan;
}

}  // namespace koecher
