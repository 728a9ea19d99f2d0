#include "koecher/sharbly.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <tuple>

#include "koecher/ideal.hpp"

namespace koecher {

namespace {

const Vec2 kE1{OElt(1), OElt(0)};
const Vec2 kE2{OElt(0), OElt(1)};

Mat2 diag(const OElt& a, const OElt& d) { return {a, OElt(0), OElt(0), d}; }

bool collinear(const Vec2& x, const Vec2& y) { return det2(x, y).is_zero(); }

// Cost of an edge for triangulation and point ranking: reduced edges are free.
Int128 edge_cost(const Vec2& x, const Vec2& y) {
  EdgeInfo e = classify_edge(x, y);
  if (e.reduced) return 0;
  if (e.collinear) return e.unit_power == INT_MAX ? Int128(1) << 40 : std::abs(e.unit_power);
  return e.size;
}

}  // namespace

NormalForm normal_form(const Mat2& a) {
  OElt dt = a.det();
  if (dt.is_zero()) throw std::domain_error("normal_form of a singular matrix");
  OElt g1 = Ideal::from_generators({a.a, a.c}).generator();
  OElt p = *a.a.divide(g1), q = *a.c.divide(g1);
  auto [x, y] = bezout(p, q);
  Mat2 t0{x, y, -q, p};
  OElt rest = *dt.divide(g1);
  OElt g2 = Ideal::principal(rest).generator();
  OElt u = *g2.divide(rest);
  Mat2 t1 = diag(OElt(1), u) * t0;
  Mat2 m = t1 * a;
  Ideal lower = Ideal::principal(g2);
  OElt b = lower.reduce(m.b);
  OElt shift = *(m.b - b).divide(g2);
  Mat2 t2{OElt(1), -shift, OElt(0), OElt(1)};
  Mat2 t = t2 * t1;
  Mat2 h = t * a;
  if (!(h.a == g1 && h.c.is_zero() && h.d == g2 && h.b == b)) throw std::logic_error("normal_form: inconsistent reduction");
  return {h, t};
}

Vec2 unimodular_vertex(const Vec2& x) {
  auto [g, v] = split_content(primitive_part(x));
  return sign_normalize(v);
}

int canonical_order(Triangle& t) {
  for (auto& v : t.v) v = sign_normalize(v);
  int sign = 1;
  for (int pass = 0; pass < 2; ++pass)
    for (int i = 0; i + 1 < 3; ++i) {
      if (t.v[i] == t.v[i + 1]) return 0;
      if (t.v[i + 1] < t.v[i]) {
        std::swap(t.v[i], t.v[i + 1]);
        sign = -sign;
      }
    }
  if (t.v[0] == t.v[1] || t.v[1] == t.v[2]) return 0;
  return sign;
}

void Chain::add(Triangle t, std::int64_t c, const Fp& f) {
  int s = canonical_order(t);
  if (s == 0) return;
  if (collinear(t.v[0], t.v[1]) && collinear(t.v[0], t.v[2])) return;
  std::uint32_t v = f.from_int(s * (c % static_cast<std::int64_t>(f.prime())));
  if (!v) return;
  auto [it, fresh] = terms.emplace(t, v);
  if (!fresh) {
    it->second = f.add(it->second, v);
    if (!it->second) terms.erase(it);
  }
}

EdgeInfo classify_edge(const Vec2& x, const Vec2& y) {
  EdgeInfo e;
  if (collinear(x, y)) {
    e.collinear = true;
    auto r = unit_ratio(x, y);
    e.unit_power = r ? r->k : INT_MAX;
    e.reduced = r && std::abs(r->k) == 1;
    return e;
  }
  e.size = size(x, y);
  e.reduced = e.size == 1;
  return e;
}

std::pair<EdgeClass, int> edge_class(const Vec2& x, const Vec2& y, const LevelIdeal& level) {
  int id = level.p1_label(OElt(0), OElt(1));
  const std::array<std::tuple<Vec2, Vec2, int>, 4> variants{
      std::tuple{x, y, 1}, std::tuple{x, -y, 1}, std::tuple{y, x, -1}, std::tuple{y, -x, -1}};
  std::optional<EdgeClass> best;
  int sign = 0;
  for (const auto& [p, q, s] : variants) {
    NormalForm nf = normal_form(Mat2::from_columns(p, q));
    EdgeClass c{nf.h, level.act(id, nf.t.inverse())};
    if (!best || c < *best) {
      best = c;
      sign = s;
    } else if (c == *best && s != sign) {
      sign = 0;
    }
  }
  return {*best, sign};
}

std::map<EdgeClass, std::uint32_t> boundary_mod_level(const Chain& c, const LevelIdeal& level, const Fp& f) {
  std::map<EdgeClass, std::uint32_t> out;
  auto add = [&](const Vec2& a, const Vec2& b, std::uint32_t coef, bool negate) {
    if (collinear(a, b)) return;
    auto [cls, s] = edge_class(a, b, level);
    if (s == 0) return;
    std::uint32_t v = (s < 0) != negate ? f.neg(coef) : coef;
    std::uint32_t& slot = out[cls];
    slot = f.add(slot, v);
    if (!slot) out.erase(cls);
  };
  for (const auto& [t, coef] : c.terms) {
    add(t.v[1], t.v[2], coef, false);
    add(t.v[0], t.v[2], coef, true);
    add(t.v[0], t.v[1], coef, false);
  }
  return out;
}

std::vector<OElt> unit_interval(const OElt& z) {
  UnitLog l = unit_log(z);
  std::vector<OElt> out;
  int step = l.k < 0 ? -1 : 1;
  for (int i = 0; i <= std::abs(l.k); ++i) out.push_back(l.sign * eps_pow(step * i));
  return out;
}

Reducer::Reducer(const FanDatabase& fan, const QuotientComplex& complex, const Fp& field)
    : fan_(&fan), complex_(&complex), f_(field) {
  identity_label_ = complex.level().p1_label(OElt(0), OElt(1));
  faces3_.resize(fan.top.size());
  faces2_.resize(fan.top.size());
  for (std::size_t r = 0; r < fan.top.size(); ++r) {
    const auto& vs = fan.top[r].perfect.vectors;
    for (const auto& face : face_lattice(fan.top[r])) {
      if (face.size() == 2 && !collinear(vs[face[0]], vs[face[1]])) faces2_[r].push_back({face[0], face[1]});
      if (face.size() != 3) continue;
      std::vector<Vec2> fv{vs[face[0]], vs[face[1]], vs[face[2]]};
      Face3 f{{face[0], face[1], face[2]}, -1, Mat2::identity(), 1};
      if (spans_plane(fv)) {
        auto hit = fan.locate(fv, 3);
        if (!hit) throw std::logic_error("3-face of a top cone missing from the census");
        f.rep = hit->first;
        f.g = hit->second;
        auto perm = induced_permutation(f.g, fan.cones[3][f.rep].vectors, fv);
        if (perm.empty()) throw std::logic_error("3-face equivalence does not permute vertices");
        f.sign = permutation_sign(perm);
      }
      faces3_[r].push_back(f);
    }
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j) {
        if (i == j || size(vs[i], vs[j]) != 1) continue;
        Mat2 n = Mat2::from_columns(vs[i], vs[j]).inverse();
        for (std::size_t k = 0; k < vs.size(); ++k) {
          if (k == i || k == j) continue;
          for (int s : {1, -1}) {
            Mat2 dn = diag(OElt(1), OElt(s)) * n;
            Vec2 z = sign_normalize(dn * vs[k]);
            frame_table_.emplace(z, FrameEntry{static_cast<int>(r), {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}, dn});
          }
        }
      }
  }
}

std::vector<Vec2> Reducer::minimal_cone(const Vec2& x, const Vec2& y, bool whole_top) const {
  constexpr int kMaxSteps = 20000;
  int r = 0;
  Mat2 g = Mat2::identity();
  for (int step = 0; step < kMaxSteps; ++step) {
    Mat2 gi = g.inverse();
    Point pt = rank_one(gi * x) + rank_one(gi * y);
    const TopCone& tc = fan_->top[r];
    int worst = -1;
    double worst_val = 0;
    std::vector<int> zero;
    for (std::size_t fi = 0; fi < tc.facets.size(); ++fi) {
      FElt v = pairing(pt, tc.facets[fi].normal);
      int s = v.real_sign();
      if (s == 0) {
        zero.push_back(static_cast<int>(fi));
      } else if (s < 0) {
        auto e = embed(tc.facets[fi].normal);
        double nrm = 0;
        for (double c : e) nrm += c * c;
        double val = v.real() / std::sqrt(nrm);
        if (worst < 0 || val < worst_val) {
          worst = static_cast<int>(fi);
          worst_val = val;
        }
      }
    }
    if (worst >= 0) {
      g = g * tc.neighbors[worst].g;
      r = tc.neighbors[worst].rep;
      continue;
    }
    std::vector<int> verts(tc.perfect.vectors.size());
    for (std::size_t i = 0; i < verts.size(); ++i) verts[i] = static_cast<int>(i);
    for (int fi : whole_top ? std::vector<int>{} : zero) {
      std::vector<int> keep;
      std::set_intersection(verts.begin(), verts.end(), tc.facets[fi].vertices.begin(), tc.facets[fi].vertices.end(),
                            std::back_inserter(keep));
      verts = std::move(keep);
    }
    std::vector<Vec2> out;
    for (int i : verts) out.push_back(sign_normalize(g * tc.perfect.vectors[i]));
    return out;
  }
  throw HeuristicFailure("facet walk did not terminate for " + vec_str(x) + ", " + vec_str(y));
}

std::vector<Reducer::Ranked> Reducer::ranked_candidates(const NormalForm& nf, const Vec2& x, const Vec2& y) {
  {
    std::lock_guard<std::mutex> lk(cache_mutex_);
    auto it = cand_cache_.find(nf.h);
    if (it != cand_cache_.end()) return it->second;
  }
  Vec2 h1 = sign_normalize(nf.h.col(0)), h2 = sign_normalize(nf.h.col(1));
  std::vector<Ranked> ranked;
  auto add = [&](const Vec2& w) {
    Vec2 c = sign_normalize(nf.t * w);
    if (c == h1 || c == h2) return;
    Int128 c1 = edge_cost(h1, c), c2 = edge_cost(c, h2);
    ranked.push_back({std::max(c1, c2), c1 + c2, c});
  };
  for (const auto& w : minimal_cone(x, y)) add(w);
  if (ranked.empty())
    for (const auto& w : minimal_cone(x, y, true)) add(w);
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.worst, a.total, a.v) < std::tie(b.worst, b.total, b.v);
  });
  std::lock_guard<std::mutex> lk(cache_mutex_);
  cand_cache_.emplace(nf.h, ranked);
  return ranked;
}

std::vector<Vec2> Reducer::candidates(const Mat2& h) {
  NormalForm nf = normal_form(h);
  std::vector<Vec2> out;
  for (const auto& r : ranked_candidates(nf, h.col(0), h.col(1))) out.push_back(r.v);
  return out;
}

std::vector<Vec2> Reducer::reducing_points(const Vec2& x, const Vec2& y) {
  const LevelIdeal& level = complex_->level();
  struct Variant {
    NormalForm nf;
    Mat2 tinv;
    EdgeClass key;
    Vec2 p, q;
  };
  std::vector<Variant> vars;
  for (const auto& [p, q] : std::array<std::pair<Vec2, Vec2>, 4>{{{x, y}, {x, -y}, {y, x}, {y, -x}}}) {
    NormalForm nf = normal_form(Mat2::from_columns(p, q));
    Mat2 tinv = nf.t.inverse();
    vars.push_back({nf, tinv, EdgeClass{nf.h, level.act(identity_label_, tinv)}, p, q});
  }
  EdgeClass best = vars[0].key;
  for (const auto& v : vars) best = std::min(best, v.key);
  std::vector<const Variant*> mins;
  for (const auto& v : vars)
    if (v.key == best) mins.push_back(&v);
  auto cands = ranked_candidates(mins[0]->nf, mins[0]->p, mins[0]->q);
  if (cands.empty()) throw HeuristicFailure("no reducing point for " + vec_str(x) + ", " + vec_str(y));
  auto orbit = [&](const Vec2& c) {
    std::vector<Vec2> pts;
    for (const auto* v : mins) {
      Vec2 w = sign_normalize(v->tinv * c);
      if (std::find(pts.begin(), pts.end(), w) == pts.end()) pts.push_back(w);
    }
    return pts;
  };
  // Prefer a best-ranked point fixed by the edge's stabilizer; otherwise average over an orbit.
  for (const auto& c : cands) {
    if (c.worst != cands[0].worst || c.total != cands[0].total) break;
    auto pts = orbit(c.v);
    if (pts.size() == 1) return pts;
  }
  return orbit(cands[0].v);
}

std::vector<Vec2> Reducer::split_points(const Vec2& x, const Vec2& y) {
  EdgeInfo e = classify_edge(x, y);
  if (e.collinear) {
    if (e.unit_power == INT_MAX) throw HeuristicFailure("collinear edge without a unit ratio");
    int k = e.unit_power;
    int half = k >= 0 ? k / 2 : -((-k + 1) / 2);
    return {sign_normalize(scale(eps_pow(half), x))};
  }
  return reducing_points(x, y);
}

std::optional<Reducer::Lookup> Reducer::locate_reduced(const Triangle& t) const {
  for (int rot = 0; rot < 3; ++rot) {
    const Vec2& a = t.v[rot];
    const Vec2& b = t.v[(rot + 1) % 3];
    const Vec2& c = t.v[(rot + 2) % 3];
    if (!det2(a, b).is_unit()) continue;
    Mat2 m = Mat2::from_columns(a, b).inverse();
    auto it = frame_table_.find(sign_normalize(m * c));
    if (it == frame_table_.end()) continue;
    const FrameEntry& e = it->second;
    Mat2 g = Mat2::from_columns(a, b) * e.g;
    std::array<int, 3> idx = e.idx;
    int sign = 1;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < 2; ++i)
        if (idx[i] > idx[i + 1]) {
          std::swap(idx[i], idx[i + 1]);
          sign = -sign;
        }
    return Lookup{e.top, g, idx, sign};
  }
  return std::nullopt;
}

bool Reducer::is_reduced(const Triangle& t) const { return locate_reduced(t).has_value(); }

std::vector<Triangle> Reducer::type0_subdivide(const Triangle& t) const {
  for (int rot = 0; rot < 3; ++rot) {
    const Vec2& a = t.v[rot];
    const Vec2& b = t.v[(rot + 1) % 3];
    const Vec2& c = t.v[(rot + 2) % 3];
    if (!det2(a, b).is_unit()) continue;
    Mat2 back = Mat2::from_columns(a, b);
    Vec2 v = back.inverse() * c;
    if (!v[0].is_unit() || !v[1].is_unit()) continue;
    UnitLog la = unit_log(v[0]), lb = unit_log(v[1]);
    if (la.k == 0 || lb.k == 0 || std::max(std::abs(la.k), std::abs(lb.k)) <= 1) continue;
    Vec2 va{v[0], OElt(0)}, vb{OElt(0), v[1]};
    std::vector<Vec2> ea, eb;
    for (const auto& z : unit_interval(v[0])) ea.push_back({z, OElt(0)});
    for (const auto& z : unit_interval(v[1])) eb.push_back({OElt(0), z});
    std::vector<Triangle> pieces{{{v, va, vb}}};
    for (std::size_t i = 0; i + 1 < ea.size(); ++i) {
      pieces.push_back({{v, ea[i], ea[i + 1]}});
      pieces.push_back({{kE2, ea[i + 1], ea[i]}});
    }
    for (std::size_t i = 0; i + 1 < eb.size(); ++i) {
      pieces.push_back({{va, eb[i], eb[i + 1]}});
      pieces.push_back({{v, eb[i + 1], eb[i]}});
    }
    for (auto& p : pieces)
      for (auto& w : p.v) w = sign_normalize(back * w);
    return pieces;
  }
  throw HeuristicFailure("level-zero triangle of unknown shape");
}

std::vector<Triangle> Reducer::triangulate(const std::vector<Vec2>& poly) {
  // Minimal-cost triangulation: (largest diagonal cost, total cost).
  int n = static_cast<int>(poly.size());
  using Cost = std::pair<Int128, Int128>;
  std::vector<std::vector<Int128>> dc(n, std::vector<Int128>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (!(i == 0 && j == n - 1)) dc[i][j] = edge_cost(poly[i], poly[j]);
  std::vector<std::vector<Cost>> best(n, std::vector<Cost>(n, {0, 0}));
  std::vector<std::vector<int>> pick(n, std::vector<int>(n, -1));
  for (int len = 2; len < n; ++len)
    for (int i = 0; i + len < n; ++i) {
      int j = i + len;
      for (int k = i + 1; k < j; ++k) {
        Cost a = best[i][k], b = best[k][j];
        Int128 worst = std::max({a.first, b.first, dc[i][k], dc[k][j]});
        Int128 total = a.second + b.second + dc[i][k] + dc[k][j];
        Cost c{worst, total};
        if (pick[i][j] < 0 || c < best[i][j]) {
          best[i][j] = c;
          pick[i][j] = k;
        }
      }
    }
  std::vector<Triangle> out;
  std::vector<std::pair<int, int>> stack{{0, n - 1}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    if (j - i < 2) continue;
    int k = pick[i][j];
    out.push_back({{poly[i], poly[k], poly[j]}});
    stack.emplace_back(i, k);
    stack.emplace_back(k, j);
  }
  return out;
}

std::vector<std::pair<Triangle, std::uint32_t>> Reducer::split(const Triangle& t, ReductionStats* stats) {
  std::array<std::vector<Vec2>, 3> pts;
  bool any = false;
  for (int i = 0; i < 3; ++i) {
    const Vec2& x = t.v[i];
    const Vec2& y = t.v[(i + 1) % 3];
    EdgeInfo e = classify_edge(x, y);
    if (e.reduced) continue;
    any = true;
    pts[i] = split_points(x, y);
    if (stats && !e.collinear) {
      for (const auto& w : pts[i])
        if (std::max(size(x, w), size(w, y)) >= e.size) ++stats->non_decreasing;
      if (pts[i].size() > 1) ++stats->averaged;
    }
  }
  std::vector<std::pair<Triangle, std::uint32_t>> out;
  if (!any) {
    if (stats) ++stats->level0;
    for (const auto& p : type0_subdivide(t)) out.emplace_back(p, 1);
    return out;
  }
  std::uint32_t weight = 1;
  for (const auto& p : pts)
    if (!p.empty()) weight = f_.mul(weight, f_.inv(static_cast<std::uint32_t>(p.size())));
  std::array<std::size_t, 3> choice{0, 0, 0};
  for (;;) {
    std::vector<Vec2> poly;
    for (int i = 0; i < 3; ++i) {
      poly.push_back(t.v[i]);
      if (!pts[i].empty()) poly.push_back(pts[i][choice[i]]);
    }
    for (const auto& p : triangulate(poly)) out.emplace_back(p, weight);
    int i = 0;
    for (; i < 3; ++i) {
      if (pts[i].empty()) continue;
      if (++choice[i] < pts[i].size()) break;
      choice[i] = 0;
    }
    if (i == 3) break;
  }
  return out;
}

Chain Reducer::reduce(Chain c, ReductionStats* stats, std::size_t max_rounds) {
  Chain done;
  for (std::size_t round = 0; round < max_rounds && c.size(); ++round) {
    if (stats) ++stats->rounds;
    Chain next;
    for (const auto& [t, coef] : c.terms) {
      if (stats) ++stats->triangles;
      if (is_reduced(t)) {
        done.add(t, coef, f_);
        continue;
      }
      for (const auto& [p, w] : split(t, stats)) next.add(p, f_.mul(coef, w), f_);
    }
    c = std::move(next);
  }
  if (c.size()) throw HeuristicFailure("reduction did not finish within " + std::to_string(max_rounds) + " rounds");
  return done;
}

const std::vector<std::pair<int, std::int64_t>>& Reducer::face_chain(int top, std::array<int, 3> idx) const {
  std::lock_guard<std::mutex> lk(chains_mutex_);
  auto key = std::make_pair(top, idx);
  auto it = chains_.find(key);
  if (it != chains_.end()) return it->second;
  const auto& faces = faces3_[top];
  const auto& edges = faces2_[top];
  std::vector<std::pair<int, std::int64_t>> sol;
  for (std::size_t fi = 0; fi < faces.size(); ++fi)
    if (faces[fi].idx == idx) sol.emplace_back(static_cast<int>(fi), 1);
  if (sol.empty()) {
    std::map<std::array<int, 2>, int> row;
    for (std::size_t e = 0; e < edges.size(); ++e) row[edges[e]] = static_cast<int>(e);
    int nv = static_cast<int>(faces.size());
    DenseMat m(edges.size(), std::vector<std::uint32_t>(nv + 1, 0));
    auto put = [&](int col, int a, int b, int s) {
      auto r = row.find({a, b});
      if (r == row.end()) return false;
      auto& x = m[r->second][col];
      x = f_.add(x, f_.from_int(s));
      return true;
    };
    const auto& vs = fan_->top[top].perfect.vectors;
    auto boundary = [&](int col, const std::array<int, 3>& t, int s) {
      const std::array<std::tuple<int, int, int>, 3> es{std::tuple{t[1], t[2], s}, std::tuple{t[0], t[2], -s},
                                                         std::tuple{t[0], t[1], s}};
      for (const auto& [a, b, sg] : es) {
        if (collinear(vs[a], vs[b])) continue;
        if (!put(col, a, b, sg)) throw std::logic_error("size-one pair is not a 2-face of its top cone");
      }
    };
    for (int fi = 0; fi < nv; ++fi)
      if (faces[fi].rep >= 0) boundary(fi, faces[fi].idx, 1);
    boundary(nv, idx, 1);
    auto piv = rref(m, f_);
    if (!piv.empty() && piv.back() == nv) throw std::logic_error("reduced triangle not a boundary in its top cone");
    for (std::size_t r = 0; r < piv.size(); ++r)
      if (m[r][nv]) sol.emplace_back(piv[r], f_.lift(m[r][nv]));
  }
  return chains_.emplace(key, std::move(sol)).first->second;
}

SparseVec Reducer::to_cells(const Chain& reduced) const {
  const LevelIdeal& level = complex_->level();
  std::vector<std::pair<int, std::int64_t>> acc;
  for (const auto& [t, coef] : reduced.terms) {
    auto lk = locate_reduced(t);
    if (!lk) throw std::invalid_argument("to_cells: triangle is not reduced");
    for (const auto& [fi, c] : face_chain(lk->top, lk->idx)) {
      const Face3& face = faces3_[lk->top][fi];
      if (face.rep < 0) continue;
      Mat2 h = lk->g * face.g;
      CellRef ref = complex_->find(3, face.rep, level.act(identity_label_, h));
      if (ref.index < 0) continue;
      std::int64_t s = static_cast<std::int64_t>(lk->sign) * face.sign * ref.sign;
      acc.emplace_back(ref.index, static_cast<std::int64_t>(f_.mul(coef, f_.from_int(s * c))));
    }
  }
  return make_sparse(std::move(acc), f_);
}

void Reducer::clear_cache() {
  std::lock_guard<std::mutex> lk(cache_mutex_);
  cand_cache_.clear();
}

std::size_t Reducer::cache_size() const {
  std::lock_guard<std::mutex> lk(cache_mutex_);
  return cand_cache_.size();
}

}  // namespace koecher
