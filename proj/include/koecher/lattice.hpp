#pragma once

#include <functional>
#include <vector>

#include "koecher/arith.hpp"

namespace koecher {

/// Visit every nonzero integer vector x, one of each pair +-x, with x^T G x <= bound.
/// G is a positive definite Gram matrix given in floating point; callers recheck exactly.
/// The visitor returns false to stop early.
void enumerate_short_vectors(const std::vector<std::vector<double>>& gram, double bound,
                             const std::function<bool(const std::vector<Int>&, double)>& visit);

}  // namespace koecher
