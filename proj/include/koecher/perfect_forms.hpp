#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "koecher/cone_geometry.hpp"

namespace koecher {

struct DeadEnd : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MinimalVectors {
  FElt min;
  std::vector<Vec2> vectors;  // sign-normalized, sorted
};

/// Exact minimum of the form over O^2 - 0 and the vectors attaining it.
MinimalVectors minimal_vectors(const Form& y);

/// A perfect form normalized to minimum 1, with its minimal vectors.
struct PerfectForm {
  Form form;
  std::vector<Vec2> vectors;
};

struct Facet {
  std::vector<int> vertices;  // indices into PerfectForm::vectors
  Form normal;                // vanishes on the facet, positive on the other vertices
};

bool spans_space(const std::vector<Vec2>& vectors);
PerfectForm initial_perfect_form();
std::vector<Facet> facets(const PerfectForm& p);
/// The perfect form across a facet; throws DeadEnd if the facet lies in the boundary.
PerfectForm neighbor(const PerfectForm& p, const Facet& f);
/// Smallest lambda > 0 at which y + lambda d acquires a minimal vector with negative d-value.
FElt flip_parameter(const Form& y, const Form& d);

/// Cone spanning sets are sets of +- classes of primitive vectors.
std::optional<Mat2> find_equivalence(const std::vector<Vec2>& from, const std::vector<Vec2>& to);
/// Every g in GL2(O) with g from = to; only for sets spanning F^2.
std::vector<Mat2> all_equivalences(const std::vector<Vec2>& from, const std::vector<Vec2>& to);
/// Permutation p with g v_i = +- w_p[i], or empty if g does not map the set onto the other.
std::vector<int> induced_permutation(const Mat2& g, const std::vector<Vec2>& from, const std::vector<Vec2>& to);
int permutation_sign(const std::vector<int>& p);
bool spans_plane(const std::vector<Vec2>& vectors);

struct Cone {
  std::vector<Vec2> vectors;
  int dim = 0;
  bool interior = false;
  std::vector<Mat2> stabilizer;  // interior cones only
  std::vector<int> character;    // orientation sign of each stabilizer element
  bool orientable() const {
    for (int c : character)
      if (c < 0) return false;
    return true;
  }
};

/// Facet i of an oriented cone (its vectors with v_i removed, order kept) equals sign * g * (rep cone).
struct FaceMap {
  int rep = -1;  // -1 when the facet lies in the boundary
  Mat2 g;
  int sign = 1;
};

struct TopCone {
  PerfectForm perfect;
  std::vector<Facet> facets;
  struct Neighbor {
    int rep;
    Mat2 g;  // neighbor pyramid = g * pyramid(rep)
  };
  std::vector<Neighbor> neighbors;
};

struct FanDatabase {
  std::vector<TopCone> top;
  std::array<std::vector<Cone>, 8> cones;            // by dimension 1..7
  std::array<std::vector<std::vector<FaceMap>>, 8> faces;  // face maps of cones of dimension 3 and 4

  std::array<int, 8> counts() const {
    std::array<int, 8> c{};
    for (int k = 1; k <= 7; ++k) c[k] = static_cast<int>(cones[k].size());
    return c;
  }
  /// Rep index and g with g * rep = given vectors (as a set), searching cones of that dimension.
  std::optional<std::pair<int, Mat2>> locate(const std::vector<Vec2>& vectors, int dim) const;
};

/// Neighbor walk from the initial form; throws DeadEnd if any facet has no neighbor.
std::vector<TopCone> voronoi_walk(int jobs = 1);
/// Full census: orbits of all faces, stabilizers, orientation characters, face maps.
FanDatabase classify_fan(int jobs = 1);
void complete_fan(FanDatabase& fan);

/// Faces (as sorted vertex index sets) of the pyramid, including the pyramid itself.
std::vector<std::vector<int>> face_lattice(const TopCone& t);

}  // namespace koecher
