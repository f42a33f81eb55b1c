#pragma once

#include <cstddef>
#include <vector>

#include "lmix/congest.hpp"
#include "lmix/fixed_point.hpp"
#include "lmix/graph.hpp"

namespace lmix {

// Walk distribution on the 1/n^c grid: value(u) = raw[u] / n^c.
struct FixedDist {
  std::size_t n = 0;
  unsigned c = 0;
  Wide scale = 1;
  std::vector<Wide> raw;
  NodeId source = 0;
  std::size_t step = 0;

  double value(NodeId u) const { return to_double(raw[u]) / to_double(scale); }
  Wide total() const;
};

struct FloodOptions {
  bool lazy = false;
  // Degree-aware fractions for non-regular graphs. Off by default: the
  // distributed algorithms are specified for regular graphs.
  bool allow_irregular = false;
};

// Throws NotRegular unless the graph is regular or irregular graphs are allowed.
void check_flood_graph(const Graph& g, const FloodOptions& options);

// w_0 = delta_source on the grid.
FixedDist fixed_point_mass(const Graph& g, NodeId source, unsigned c);

// One round of deterministic flooding: every node with w != 0 sends
// (raw, degree) to each neighbor, i.e. the exact fraction raw / (n^c d).
// Receivers sum the fractions exactly and round once to the grid.
void flood_step(Network& net, FixedDist& dist, const FloodOptions& options);

FixedDist run_estimate_rw_probability(Network& net, NodeId source, std::size_t length,
                                      unsigned c, const FloodOptions& options = {});

// The same recurrence evaluated without message passing.
FixedDist replay_estimate_centralized(const Graph& g, NodeId source, std::size_t length,
                                      unsigned c, const FloodOptions& options = {});

}  // namespace lmix
