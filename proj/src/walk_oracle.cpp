#include "lmix/walk_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lmix/error.hpp"
#include "lmix/set_size_grid.hpp"

namespace lmix {

namespace {

void check_source(const Graph& g, NodeId source) {
  if (source >= g.node_count()) {
    throw Error(ErrorCode::OutOfRange, "source " + std::to_string(source) + " out of range");
  }
}

void check_walkable(const Graph& g, bool lazy) {
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  if (!lazy && g.is_bipartite()) {
    throw Error(ErrorCode::BipartiteWithoutLazy, "simple walk on a bipartite graph never mixes");
  }
}

void check_params(const MixParams& params) {
  if (!(params.beta >= 1.0)) throw Error(ErrorCode::InfeasibleParams, "beta must be >= 1");
  if (!(params.eps > 0.0 && params.eps < 1.0)) {
    throw Error(ErrorCode::InfeasibleParams, "eps must lie in (0, 1)");
  }
}

double degree_share(const Graph& g, NodeId v, double volume) {
  return static_cast<double>(g.degree(v)) / volume;
}

// Selects the `k` smallest keys (ties to smaller id) among `candidates`,
// marking them in `chosen`.
void select_smallest(std::vector<NodeId>& candidates, std::span<const double> keys, std::size_t k,
                     std::vector<char>& chosen) {
  auto less = [&](NodeId a, NodeId b) { return keys[a] < keys[b] || (keys[a] == keys[b] && a < b); };
  if (k < candidates.size()) {
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                     candidates.end(), less);
  }
  for (std::size_t i = 0; i < k && i < candidates.size(); ++i) chosen[candidates[i]] = 1;
}

struct Scratch {
  std::vector<double> keys;
  std::vector<double> target;
  std::vector<NodeId> candidates;
  std::vector<char> chosen;
};

// Fills `scratch.chosen` with the greedy set for a fixed per-node target and
// returns the gap summed in node-id order.
double greedy_pass(std::span<const double> p, std::size_t set_size,
                   std::optional<NodeId> must_contain, std::span<const double> target,
                   Scratch& scratch) {
  const std::size_t n = p.size();
  scratch.keys.resize(n);
  for (std::size_t u = 0; u < n; ++u) scratch.keys[u] = std::abs(p[u] - target[u]);
  scratch.chosen.assign(n, 0);
  scratch.candidates.clear();
  std::size_t k = set_size;
  for (NodeId u = 0; u < n; ++u) {
    if (must_contain && *must_contain == u) continue;
    scratch.candidates.push_back(u);
  }
  if (must_contain) {
    scratch.chosen[*must_contain] = 1;
    --k;
  }
  select_smallest(scratch.candidates, scratch.keys, k, scratch.chosen);
  double gap = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    if (scratch.chosen[u]) gap += scratch.keys[u];
  }
  return gap;
}

double gap_for_size(const Graph& g, std::span<const double> p, std::size_t set_size,
                    TargetMode mode, std::optional<NodeId> must_contain, Scratch& scratch) {
  const std::size_t n = p.size();
  std::vector<double>& target = scratch.target;
  target.resize(n);
  if (mode == TargetMode::uniform) {
    std::fill(target.begin(), target.end(), 1.0 / static_cast<double>(set_size));
    return greedy_pass(p, set_size, must_contain, target, scratch);
  }

  constexpr int kMaxRefinements = 10;
  double volume = static_cast<double>(set_size) * static_cast<double>(g.total_volume()) /
                  static_cast<double>(n);
  for (int iter = 0; iter < kMaxRefinements; ++iter) {
    for (NodeId u = 0; u < n; ++u) target[u] = degree_share(g, u, volume);
    const double gap = greedy_pass(p, set_size, must_contain, target, scratch);
    std::uint64_t chosen_volume = 0;
    for (NodeId u = 0; u < n; ++u) {
      if (scratch.chosen[u]) chosen_volume += g.degree(u);
    }
    if (static_cast<double>(chosen_volume) == volume) return gap;
    volume = static_cast<double>(chosen_volume);
  }
  // No fixpoint: score the last set against its own restricted stationary.
  double gap = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    if (scratch.chosen[u]) gap += std::abs(p[u] - degree_share(g, u, volume));
  }
  return gap;
}

std::vector<NodeId> chosen_members(const std::vector<char>& chosen) {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < chosen.size(); ++u) {
    if (chosen[u]) out.push_back(u);
  }
  return out;
}

}  // namespace

Dist point_mass(const Graph& g, NodeId source) {
  check_source(g, source);
  Dist d;
  d.p.assign(g.node_count(), 0.0);
  d.p[source] = 1.0;
  d.source = source;
  return d;
}

std::vector<double> stationary(const Graph& g) {
  const auto volume = static_cast<double>(g.total_volume());
  std::vector<double> pi(g.node_count());
  for (NodeId v = 0; v < pi.size(); ++v) pi[v] = degree_share(g, v, volume);
  return pi;
}

Dist step(const Graph& g, const Dist& d, bool lazy) {
  const std::size_t n = g.node_count();
  std::vector<double> share(n);
  for (NodeId v = 0; v < n; ++v) share[v] = d.p[v] / static_cast<double>(g.degree(v));
  Dist next;
  next.p.assign(n, 0.0);
  next.source = d.source;
  next.step = d.step + 1;
  for (NodeId u = 0; u < n; ++u) {
    double inflow = 0.0;
    for (NodeId v : g.neighbors(u)) inflow += share[v];
    next.p[u] = lazy ? 0.5 * d.p[u] + 0.5 * inflow : inflow;
  }
  return next;
}

double l1_to_stationary(const Graph& g, const Dist& d) {
  const auto volume = static_cast<double>(g.total_volume());
  double total = 0.0;
  for (NodeId v = 0; v < d.p.size(); ++v) total += std::abs(d.p[v] - degree_share(g, v, volume));
  return total;
}

std::uint64_t step_cap(std::size_t n) {
  const auto m = static_cast<std::uint64_t>(n);
  return 8 * m * m * m;
}

std::size_t mixing_time(const Graph& g, NodeId source, double eps, bool lazy) {
  check_source(g, source);
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InfeasibleParams, "eps must lie in (0, 1)");
  check_walkable(g, lazy);
  const std::uint64_t cap = step_cap(g.node_count());
  Dist d = point_mass(g, source);
  for (std::uint64_t t = 1; t <= cap; ++t) {
    d = step(g, d, lazy);
    if (l1_to_stationary(g, d) < eps) return t;
  }
  throw Error(ErrorCode::ExceededCap, "no mixing within " + std::to_string(cap) + " steps");
}

GapResult restricted_gap(const Graph& g, std::span<const double> p, std::size_t set_size,
                         TargetMode mode, std::optional<NodeId> must_contain) {
  if (set_size < 1 || set_size > p.size()) {
    throw Error(ErrorCode::OutOfRange, "set size must lie in [1, n]");
  }
  if (p.size() != g.node_count()) throw Error(ErrorCode::InvalidInput, "distribution size != n");
  if (must_contain && *must_contain >= p.size()) {
    throw Error(ErrorCode::OutOfRange, "forced member out of range");
  }
  Scratch scratch;
  GapResult out;
  out.gap = gap_for_size(g, p, set_size, mode, must_contain, scratch);
  out.witness = chosen_members(scratch.chosen);
  return out;
}

LocalMixOracleResult local_mixing_oracle(const Graph& g, NodeId source, const MixParams& params,
                                         const OracleOptions& options) {
  check_source(g, source);
  check_params(params);
  check_walkable(g, params.lazy);

  const std::size_t n = g.node_count();
  const std::optional<NodeId> must_contain =
      options.contain_source ? std::optional<NodeId>(source) : std::nullopt;

  std::vector<std::size_t> sizes;
  TargetMode target = options.target;
  if (options.mode == OracleMode::definition) {
    const auto first = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / params.beta));
    for (std::size_t r = std::max<std::size_t>(1, first); r <= n; ++r) sizes.push_back(r);
  } else {
    sizes = make_grid(n, params.beta, options.eps_grid.value_or(params.eps)).sizes;
    target = TargetMode::uniform;
  }

  auto threshold_for = [&](std::size_t index) {
    if (options.mode == OracleMode::definition) return params.eps;
    if (index == 0 && options.strict_first) return params.eps;
    return options.threshold_factor * params.eps;
  };
  auto scheduled = [&](std::uint64_t t) {
    if (options.mode == OracleMode::definition || options.schedule == LengthSchedule::unit) {
      return true;
    }
    return (t & (t - 1)) == 0;
  };

  Scratch scratch;
  const std::uint64_t cap = step_cap(n);
  Dist d = point_mass(g, source);
  for (std::uint64_t t = 1; t <= cap; ++t) {
    d = step(g, d, params.lazy);
    if (!scheduled(t)) continue;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double gap = gap_for_size(g, d.p, sizes[i], target, must_contain, scratch);
      if (gap < threshold_for(i)) {
        LocalMixOracleResult result;
        result.tau = t;
        result.set_size = sizes[i];
        result.witness = chosen_members(scratch.chosen);
        result.gap = gap;
        result.mode = options.mode;
        return result;
      }
    }
  }
  throw Error(ErrorCode::ExceededCap, "no local mixing within " + std::to_string(cap) + " steps");
}

double validate_condition(const Graph& g, const LocalMixOracleResult& result) {
  if (result.witness.size() >= g.node_count()) return 0.0;
  const Ratio phi = conductance(g, NodeSubset(g, result.witness));
  return static_cast<double>(result.tau) * phi.value();
}

}  // namespace lmix
