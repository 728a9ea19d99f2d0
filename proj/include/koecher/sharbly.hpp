#pragma once

#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "koecher/cone_geometry.hpp"
#include "koecher/koecher_complex.hpp"
#include "koecher/modp.hpp"
#include "koecher/perfect_forms.hpp"

namespace koecher {

/// Raised when the reduction heuristics fail to make progress.
struct HeuristicFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// H = T A with T in GL2(O) and H upper triangular with canonical diagonal; H depends only on
/// the orbit GL2(O) A.
struct NormalForm {
  Mat2 h;
  Mat2 t;
};
NormalForm normal_form(const Mat2& a);

/// x divided by the canonical generator of its content ideal (x itself when unimodular).
/// Linear in x up to that ideal, so it commutes with GL2(O).
Vec2 unimodular_vertex(const Vec2& x);

/// Oriented 1-sharbly [v0, v1, v2] with sign-normalized spanning points as vertices.
struct Triangle {
  std::array<Vec2, 3> v;
  friend bool operator==(const Triangle&, const Triangle&) = default;
  friend auto operator<=>(const Triangle& a, const Triangle& b) = default;
};

/// Sign-normalized vertices sorted; returns the permutation sign, or 0 if two vertices coincide.
int canonical_order(Triangle& t);

/// 1-sharbly chain mod Gamma_0(n) in the trivial-label frame, coefficients in F_p.
struct Chain {
  std::map<Triangle, std::uint32_t> terms;
  void add(Triangle t, std::int64_t c, const Fp& f);
  std::size_t size() const { return terms.size(); }
};

struct EdgeInfo {
  bool collinear = false;
  int unit_power = 0;  // for collinear edges y = +-eps^k x
  Int128 size = 0;
  bool reduced = false;
};
EdgeInfo classify_edge(const Vec2& x, const Vec2& y);

/// Canonical class of an oriented edge [x, y] modulo Gamma_0(n).
struct EdgeClass {
  Mat2 h;
  int label = 0;
  friend bool operator==(const EdgeClass&, const EdgeClass&) = default;
  friend auto operator<=>(const EdgeClass& a, const EdgeClass& b) = default;
};
/// Class and orientation sign (0 if the edge equals its own reverse).
std::pair<EdgeClass, int> edge_class(const Vec2& x, const Vec2& y, const LevelIdeal& level);

/// Boundary of a chain modulo Gamma_0(n); collinear edges vanish.  Empty iff the chain is a cycle.
std::map<EdgeClass, std::uint32_t> boundary_mod_level(const Chain& c, const LevelIdeal& level, const Fp& f);

/// IInt(z) for a unit z = +-eps^n: [+-1, +-eps^{+-1}, ..., z].
std::vector<OElt> unit_interval(const OElt& z);

struct ReductionStats {
  std::size_t rounds = 0;
  std::size_t triangles = 0;
  std::size_t level0 = 0;
  std::size_t non_decreasing = 0;  // edge splits that failed to shrink the edge size
  std::size_t averaged = 0;        // edge splits averaged over a stabilizer orbit
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
};

/// The reduction algorithm: rewrites a 1-sharbly cycle as a homologous chain of Koecher 3-cells.
class Reducer {
 public:
  Reducer(const FanDatabase& fan, const QuotientComplex& complex, const Fp& field);

  /// Equivariant reducing points for a non-reduced, non-collinear edge: a single point fixed by the
  /// edge's stabilizer when one ranks best, otherwise an orbit to be averaged over.
  std::vector<Vec2> reducing_points(const Vec2& x, const Vec2& y);
  /// Spanning points of the minimal fan cone containing q(h1) + q(h2), ordered by preference.
  std::vector<Vec2> candidates(const Mat2& h);
  /// Vertices of the minimal fan cone containing q(x) + q(y), or of a top cone containing it.
  std::vector<Vec2> minimal_cone(const Vec2& x, const Vec2& y, bool whole_top = false) const;

  bool is_reduced(const Triangle& t) const;
  /// Subdivision of a level-zero triangle into reduced triangles; throws if t is not of that shape.
  std::vector<Triangle> type0_subdivide(const Triangle& t) const;
  /// Rewrites the chain until every triangle is reduced.
  Chain reduce(Chain c, ReductionStats* stats = nullptr, std::size_t max_rounds = 200);
  /// Koecher cells of a reduced chain.
  SparseVec to_cells(const Chain& reduced) const;

  void clear_cache();
  std::size_t cache_size() const;

 private:
  struct Lookup {
    int top;
    Mat2 g;  // t = g [v_i, v_j, v_k] as rays, with the orientation sign below
    std::array<int, 3> idx;
    int sign;
  };
  std::optional<Lookup> locate_reduced(const Triangle& t) const;
  const std::vector<std::pair<int, std::int64_t>>& face_chain(int top, std::array<int, 3> idx) const;
  struct Ranked {
    Int128 worst, total;
    Vec2 v;
  };
  std::vector<Vec2> split_points(const Vec2& x, const Vec2& y);
  std::vector<std::pair<Triangle, std::uint32_t>> split(const Triangle& t, ReductionStats* stats);
  static std::vector<Triangle> triangulate(const std::vector<Vec2>& polygon);
  std::vector<Ranked> ranked_candidates(const NormalForm& nf, const Vec2& x, const Vec2& y);

  struct Face3 {
    std::array<int, 3> idx;
    int rep;  // -1 for faces in the boundary
    Mat2 g;   // face (sorted vertex order) = sign * g * rep
    int sign;
  };
  struct FrameEntry {
    int top;
    std::array<int, 3> idx;  // vertices landing on a, b, c
    Mat2 g;                  // sends (v_i, v_j) to (e1, +-e2)
  };

  const FanDatabase* fan_;
  const QuotientComplex* complex_;
  Fp f_;
  int identity_label_;
  // third vertex, in the frame sending a size-one edge to (e1, e2) -> where the triangle sits
  std::map<Vec2, FrameEntry> frame_table_;
  std::vector<std::vector<Face3>> faces3_;
  std::vector<std::vector<std::array<int, 2>>> faces2_;
  mutable std::map<std::pair<int, std::array<int, 3>>, std::vector<std::pair<int, std::int64_t>>> chains_;
  mutable std::mutex chains_mutex_;
  std::map<Mat2, std::vector<Ranked>> cand_cache_;
  mutable std::mutex cache_mutex_;
};

}  // namespace koecher
