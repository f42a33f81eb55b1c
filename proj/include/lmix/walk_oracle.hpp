#pragma once

// Centralized ground truth for random-walk distributions, mixing time and
// local mixing time. Everything here is computed in double precision from
// the full graph; the distributed algorithms in congest.hpp and
// local_mixing.hpp are validated against it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lmix/graph.hpp"

namespace lmix {

// Random-walk probability vector p_t started from `source`.
struct Dist {
  std::vector<double> p;
  NodeId source = 0;
  std::size_t step = 0;
};

Dist point_mass(const Graph& g, NodeId source);
// pi(v) = d(v) / 2m.
std::vector<double> stationary(const Graph& g);

// One application of the transition operator. The lazy walk stays put with
// probability 1/2.
Dist step(const Graph& g, const Dist& d, bool lazy = false);

// ||p_t - pi||_1.
double l1_to_stationary(const Graph& g, const Dist& d);

// Walks are capped at 8 n^3 steps.
std::uint64_t step_cap(std::size_t n);

// Smallest t >= 1 with ||p_t - pi||_1 < eps. Throws BipartiteWithoutLazy,
// Disconnected, ExceededCap.
std::size_t mixing_time(const Graph& g, NodeId source, double eps, bool lazy = false);

struct MixParams {
  double beta = 1.0;
  double eps = 0.0;
  bool lazy = false;
};

enum class TargetMode {
  // x_u = |p(u) - 1/R|, the regular-graph target.
  uniform,
  // x_u = |p(u) - d(u)/mu(S)| with mu(S) refined to a fixpoint over the
  // greedily chosen set.
  degree,
};

struct GapResult {
  double gap = 0.0;
  std::vector<NodeId> witness;  // sorted ascending
};

// Sum of the R smallest x_u and the nodes achieving it. Ties in x_u go to
// the smaller node id. With `must_contain`, that node is forced into the set
// and the other R-1 are chosen greedily.
GapResult restricted_gap(const Graph& g, std::span<const double> p, std::size_t set_size,
                         TargetMode mode, std::optional<NodeId> must_contain = std::nullopt);

enum class OracleMode {
  // Threshold eps, every set size in [ceil(n/beta), n].
  definition,
  // The distributed algorithm's acceptance rule: set sizes from the
  // (1+eps) grid, threshold 4 eps, uniform target.
  algorithm_grid,
};

enum class LengthSchedule { unit, doubling };

struct OracleOptions {
  OracleMode mode = OracleMode::definition;
  bool contain_source = false;
  // Only used in definition mode; algorithm_grid always uses uniform.
  TargetMode target = TargetMode::degree;
  // Only used in algorithm_grid mode.
  LengthSchedule schedule = LengthSchedule::unit;
  std::optional<double> eps_grid;  // defaults to params.eps
  double threshold_factor = 4.0;
  bool strict_first = false;  // require eps (not factor*eps) at R_0
};

struct LocalMixOracleResult {
  std::size_t tau = 0;
  std::size_t set_size = 0;
  std::vector<NodeId> witness;
  double gap = 0.0;
  OracleMode mode = OracleMode::definition;
};

LocalMixOracleResult local_mixing_oracle(const Graph& g, NodeId source, const MixParams& params,
                                         const OracleOptions& options = {});

// tau * phi(witness). A witness covering all of V has no boundary and
// yields 0.
double validate_condition(const Graph& g, const LocalMixOracleResult& result);

}  // namespace lmix
