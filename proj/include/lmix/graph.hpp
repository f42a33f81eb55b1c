#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lmix {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;
};

// Undirected simple graph in compressed adjacency form. Neighbor lists are
// sorted ascending. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  // Rejects out-of-range endpoints, self-loops and duplicate edges.
  static Graph from_edge_list(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  bool has_edge(NodeId u, NodeId v) const;

  // Sum of degrees, i.e. 2m.
  std::uint64_t total_volume() const { return targets_.size(); }

  std::optional<std::size_t> regular_degree() const;
  bool is_connected() const;
  bool is_bipartite() const;
  // Requires a connected graph.
  std::size_t diameter() const;
  std::size_t eccentricity(NodeId u) const;

  // Each edge once, with u < v, ordered lexicographically.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

// Sorted, deduplicated set of nodes with its cached volume.
class NodeSubset {
 public:
  NodeSubset() = default;
  NodeSubset(const Graph& g, std::vector<NodeId> members);

  std::span<const NodeId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::uint64_t volume() const { return volume_; }
  bool contains(NodeId v) const;

 private:
  std::vector<NodeId> members_;
  std::uint64_t volume_ = 0;
};

// Exact ratio of non-negative integers. Not reduced.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

// |E(S, V\S)| / min(vol(S), vol(V\S)). Requires a non-empty proper subset.
Ratio conductance(const Graph& g, const NodeSubset& s);
std::uint64_t cut_size(const Graph& g, const NodeSubset& s);

namespace gen {

Graph complete(std::size_t n);
Graph cycle(std::size_t n);
Graph path(std::size_t n);
// Configuration model: stubs are paired at random, redrawing pairs that
// would create loops or repeated edges. Restarts up to 1000 times until the
// result is connected.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);
// `cliques` copies of K_size joined in a path. Clique i's highest-id node is
// bridged to clique i+1's lowest-id node.
Graph barbell(std::size_t cliques, std::size_t size);

}  // namespace gen

// Text format: "n m" header then m lines "u v" with u < v, 0-indexed.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace lmix
