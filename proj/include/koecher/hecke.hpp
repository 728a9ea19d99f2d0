#pragma once

#include <cstdint>
#include <vector>

#include "koecher/ideal.hpp"
#include "koecher/koecher_complex.hpp"
#include "koecher/sharbly.hpp"

namespace koecher {

/// A computed invariant that must hold exactly did not.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Left coset representatives of Gamma_0(n) diag(1, pi) Gamma_0(n) for a prime q = (pi) not dividing n.
std::vector<Mat2> hecke_cosets(const PrimeIdeal& q);

/// Image of a Koecher 3-cycle under the coset sum, as 1-sharblies with unimodular vertices.
Chain hecke_image(const SparseVec& cycle, const QuotientComplex& complex, const std::vector<Mat2>& cosets, const Fp& f);

struct HeckeStats {
  ReductionStats reduction;
  std::size_t image_terms = 0;
  std::size_t reduced_terms = 0;
};

struct HeckeOptions {
  bool verify_cycles = false;  // check every image and reduced chain is a cycle modulo Gamma_0(n)
  int jobs = 1;
  std::size_t max_rounds = 200;
};

/// Matrix of T_q on the homology basis: column k holds the coordinates of T_q(basis[k]).
DenseMat hecke_matrix(const Homology& homology, const QuotientComplex& complex, Reducer& reducer, const PrimeIdeal& q,
                      const HeckeOptions& options = {}, HeckeStats* stats = nullptr);

}  // namespace koecher
