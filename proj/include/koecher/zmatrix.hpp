#pragma once

#include <vector>

#include <gmpxx.h>

namespace koecher {

using ZMat = std::vector<std::vector<mpz_class>>;

/// Row Hermite normal form: nonzero rows only, pivots positive and increasing,
/// entries above a pivot reduced into [0, pivot).  If transform is given it receives
/// a unimodular U with U*A = [H; 0].
ZMat hermite_form(const ZMat& a, ZMat* transform = nullptr);

/// LLL-reduce the rows of an integral basis under the positive definite form gram (row vectors
/// are combined as integer vectors; gram acts on coordinates).  Returns the new basis.
std::vector<std::vector<mpz_class>> lll_reduce(std::vector<std::vector<mpz_class>> basis,
                                               const std::vector<std::vector<double>>& gram);

}  // namespace koecher
