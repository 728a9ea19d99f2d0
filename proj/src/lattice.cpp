#include "koecher/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace koecher {

void enumerate_short_vectors(const std::vector<std::vector<double>>& gram, double bound,
                             const std::function<bool(const std::vector<Int>&, double)>& visit) {
  const int n = static_cast<int>(gram.size());
  // Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
  std::vector<std::vector<double>> q = gram;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (int k = i + 1; k < n; ++k)
      for (int l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    if (!(q[i][i] > 0)) throw std::domain_error("enumerate_short_vectors: Gram matrix not positive definite");
  }
  const double slack = bound * 1e-9 + 1e-9;
  std::vector<Int> x(n, 0);
  std::vector<double> rem(n + 1, 0.0), center(n, 0.0);
  rem[n] = bound + slack;
  bool stop = false;

  auto first_nonzero_positive = [&]() {
    for (int i = n - 1; i >= 0; --i)
      if (x[i] != 0) return x[i] > 0;
    return false;
  };

  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    double c = 0;
    for (int j = i + 1; j < n; ++j) c += q[i][j] * static_cast<double>(x[j]);
    center[i] = -c;
    double r = std::sqrt(std::max(0.0, rem[i + 1] / q[i][i]));
    Int lo = static_cast<Int>(std::ceil(center[i] - r - 1e-12));
    Int hi = static_cast<Int>(std::floor(center[i] + r + 1e-12));
    for (Int v = lo; v <= hi && !stop; ++v) {
      double d = static_cast<double>(v) - center[i];
      double used = q[i][i] * d * d;
      if (used > rem[i + 1]) continue;
      x[i] = v;
      rem[i] = rem[i + 1] - used;
      if (i == 0) {
        if (first_nonzero_positive()) {
          if (!visit(x, bound + slack - rem[0])) stop = true;
        }
      } else {
        rec(i - 1);
      }
    }
    x[i] = 0;
  };
  if (n > 0) rec(n - 1);
}

}  // namespace koecher
