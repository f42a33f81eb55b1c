#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>

#include "lmix/congest.hpp"
#include "lmix/fixed_point.hpp"
#include "lmix/graph.hpp"
#include "lmix/set_size_grid.hpp"

namespace lmix {

inline constexpr double kDefaultEps = 1.0 / (8.0 * std::numbers::e);
inline constexpr unsigned kDefaultGridExponent = 6;

enum class LocalMixingMode { approx2, exact };

enum class BfsStrategy {
  // Grow the tree by one level per iteration, charging only new levels.
  incremental,
  // Rebuild the tree from scratch every iteration.
  rebuild,
};

struct LocalMixingOptions {
  double beta = 1.0;
  double eps = kDefaultEps;
  unsigned c = kDefaultGridExponent;
  // Ratio of the set-size grid; defaults to eps.
  std::optional<double> eps_grid;
  bool lazy = false;
  bool allow_irregular = false;
  // Require gap < eps (instead of 4 eps) at the smallest set size.
  bool strict_first = false;
  // Break key ties with random offsets in [1/n^8, 1/n^4] on the 1/n^(c+2)
  // grid instead of by node id.
  bool perturb = false;
  std::uint64_t perturb_seed = 0;
  BfsStrategy bfs = BfsStrategy::incremental;  // exact mode only
};

struct LocalMixingResult {
  std::size_t ell = 0;
  std::size_t set_size = 0;
  // gap = gap_raw / gap_scale; gap_scale is n^c (n^(c+2) when perturbed).
  Wide gap_raw = 0;
  Wide gap_scale = 1;
  double gap = 0.0;
  RoundLedger ledger;
  LocalMixingMode mode = LocalMixingMode::approx2;
  SetSizeGrid schedule;
  std::size_t iterations = 0;
  std::size_t tree_depth = 0;
};

// Doubles the walk length until some grid size R has its R smallest
// |w_l(u) - 1/R| summing below 4 eps. Output length is a power of two.
LocalMixingResult approx_local_mixing(const Graph& g, NodeId source,
                                      const LocalMixingOptions& options);

// Same checks for l = 1, 2, 3, ..., advancing the walk by one flooding
// round per iteration.
LocalMixingResult exact_local_mixing(const Graph& g, NodeId source,
                                     const LocalMixingOptions& options);

// 64 l log2(n)^2 |grid|.
double approx_round_bound(std::size_t n, std::size_t ell, std::size_t grid_size);
// 64 l min(l, D) log2(n) |grid|.
double exact_round_bound(std::size_t n, std::size_t ell, std::size_t diameter,
                         std::size_t grid_size);

}  // namespace lmix
