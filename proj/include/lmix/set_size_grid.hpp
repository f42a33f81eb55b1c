#pragma once

#include <cstddef>
#include <vector>

namespace lmix {

// Candidate local-mixing set sizes R_0 < R_1 < ... = n, where
// R_0 = ceil(n / beta) and each size grows by a factor (1 + eps).
struct SetSizeGrid {
  std::vector<std::size_t> sizes;
};

// R_i = min(n, ceil((1+eps)^i * n / beta)), deduplicated, n appended.
SetSizeGrid make_grid(std::size_t n, double beta, double eps);

}  // namespace lmix
