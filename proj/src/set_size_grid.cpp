#include "lmix/set_size_grid.hpp"

#include <algorithm>
#include <cmath>

#include "lmix/error.hpp"

namespace lmix {

namespace {

// Ceiling that does not round a value like 25.000000000004 up to 26.
std::size_t ceil_tolerant(double x) {
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

}  // namespace

SetSizeGrid make_grid(std::size_t n, double beta, double eps) {
  if (n == 0) throw Error(ErrorCode::InfeasibleParams, "grid needs n >= 1");
  if (!(beta >= 1.0)) throw Error(ErrorCode::InfeasibleParams, "beta must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InfeasibleParams, "grid ratio eps must be > 0");

  SetSizeGrid grid;
  const double base = static_cast<double>(n) / beta;
  for (int i = 0;; ++i) {
    const double scaled = std::pow(1.0 + eps, i) * base;
    const std::size_t r = std::min(n, std::max<std::size_t>(1, ceil_tolerant(scaled)));
    if (grid.sizes.empty() || r > grid.sizes.back()) grid.sizes.push_back(r);
    if (r >= n) break;
  }
  return grid;
}

}  // namespace lmix
