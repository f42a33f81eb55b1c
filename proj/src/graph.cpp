#include "lmix/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "lmix/error.hpp"

namespace lmix {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::EmptyOrFullSubset: return "EmptyOrFullSubset";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::BipartiteWithoutLazy: return "BipartiteWithoutLazy";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::ExceededCap: return "ExceededCap";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::MessageTooLarge: return "MessageTooLarge";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Graph Graph::from_edge_list(std::size_t node_count, std::span<const Edge> edges) {
  if (node_count == 0) {
    throw Error(ErrorCode::OutOfRange, "graph needs at least one node");
  }
  if (node_count > std::numeric_limits<NodeId>::max()) {
    throw Error(ErrorCode::OutOfRange, "node count exceeds id range");
  }
  std::vector<std::size_t> degree(node_count, 0);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw Error(ErrorCode::OutOfRange, "edge (" + std::to_string(e.u) + "," +
                                             std::to_string(e.v) + ") has an endpoint >= " +
                                             std::to_string(node_count));
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::SelfLoop, "self-loop at node " + std::to_string(e.u));
    }
    ++degree[e.u];
    ++degree[e.v];
  }

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), g.offsets_.begin() + 1);
  g.targets_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.targets_[fill[e.u]++] = e.v;
    g.targets_[fill[e.v]++] = e.u;
  }
  for (std::size_t u = 0; u < node_count; ++u) {
    auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
    auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
    std::sort(first, last);
    auto dup = std::adjacent_find(first, last);
    if (dup != last) {
      throw Error(ErrorCode::DuplicateEdge,
                  "edge (" + std::to_string(u) + "," + std::to_string(*dup) + ") listed twice");
    }
  }
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<std::size_t> Graph::regular_degree() const {
  const std::size_t n = node_count();
  if (n == 0) return std::nullopt;
  const std::size_t d = degree(0);
  for (NodeId u = 1; u < n; ++u) {
    if (degree(u) != d) return std::nullopt;
  }
  return d;
}

namespace {

std::vector<std::size_t> bfs_distances(const Graph& g, NodeId root) {
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(g.node_count(), kUnseen);
  std::queue<NodeId> queue;
  dist[root] = 0;
  queue.push(root);
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnseen) {
        dist[v] = dist[u] + 1;
        queue.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

bool Graph::is_connected() const {
  const auto dist = bfs_distances(*this, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](std::size_t d) { return d == std::numeric_limits<std::size_t>::max(); });
}

bool Graph::is_bipartite() const {
  const std::size_t n = node_count();
  std::vector<int> side(n, -1);
  for (NodeId start = 0; start < n; ++start) {
    if (side[start] != -1) continue;
    side[start] = 0;
    std::queue<NodeId> queue;
    queue.push(start);
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop();
      for (NodeId v : neighbors(u)) {
        if (side[v] == -1) {
          side[v] = 1 - side[u];
          queue.push(v);
        } else if (side[v] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::size_t Graph::eccentricity(NodeId u) const {
  const auto dist = bfs_distances(*this, u);
  const std::size_t ecc = *std::max_element(dist.begin(), dist.end());
  if (ecc == std::numeric_limits<std::size_t>::max()) {
    throw Error(ErrorCode::Disconnected, "eccentricity of a disconnected graph");
  }
  return ecc;
}

std::size_t Graph::diameter() const {
  std::size_t d = 0;
  for (NodeId u = 0; u < node_count(); ++u) d = std::max(d, eccentricity(u));
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

NodeSubset::NodeSubset(const Graph& g, std::vector<NodeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (NodeId v : members_) {
    if (v >= g.node_count()) {
      throw Error(ErrorCode::OutOfRange, "subset member " + std::to_string(v) + " out of range");
    }
    volume_ += g.degree(v);
  }
}

bool NodeSubset::contains(NodeId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::uint64_t cut_size(const Graph& g, const NodeSubset& s) {
  std::uint64_t cut = 0;
  for (NodeId u : s.members()) {
    for (NodeId v : g.neighbors(u)) {
      if (!s.contains(v)) ++cut;
    }
  }
  return cut;
}

Ratio conductance(const Graph& g, const NodeSubset& s) {
  if (s.size() == 0 || s.size() >= g.node_count()) {
    throw Error(ErrorCode::EmptyOrFullSubset, "conductance needs a non-empty proper subset");
  }
  const std::uint64_t inside = s.volume();
  const std::uint64_t outside = g.total_volume() - inside;
  return {cut_size(g, s), std::min(inside, outside)};
}

namespace gen {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InfeasibleParams, what);
}

}  // namespace

Graph complete(std::size_t n) {
  require(n >= 2, "complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph::from_edge_list(n, edges);
}

Graph cycle(std::size_t n) {
  require(n >= 3, "cycle needs n >= 3");
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  edges.push_back({0, static_cast<NodeId>(n - 1)});
  return Graph::from_edge_list(n, edges);
}

Graph path(std::size_t n) {
  require(n >= 2, "path needs n >= 2");
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph::from_edge_list(n, edges);
}

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(d >= 1 && d < n, "random regular graph needs 1 <= d < n");
  require((n * d) % 2 == 0, "random regular graph needs n*d even");
  constexpr int kMaxAttempts = 1000;

  std::mt19937_64 rng(seed);
  std::vector<NodeId> stubs(n * d);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<NodeId>(i / d);

  // Stubs are paired one at a time; a pair that would form a loop or a
  // repeated edge is redrawn, and an attempt that gets stuck restarts.
  constexpr int kMaxRedraws = 100;
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<NodeId> open = stubs;
    edges.clear();
    seen.clear();
    bool stuck = false;
    while (!open.empty() && !stuck) {
      stuck = true;
      for (int redraw = 0; redraw < kMaxRedraws; ++redraw) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        const std::size_t i = pick(rng), j = pick(rng);
        NodeId a = open[i], b = open[j];
        if (i == j || a == b) continue;
        if (a > b) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        if (!seen.insert(key).second) continue;
        edges.push_back({a, b});
        // Remove the larger index first so the smaller stays valid.
        for (std::size_t k : {std::max(i, j), std::min(i, j)}) {
          open[k] = open.back();
          open.pop_back();
        }
        stuck = false;
        break;
      }
    }
    if (stuck) continue;
    Graph g = Graph::from_edge_list(n, edges);
    if (g.is_connected()) return g;
  }
  throw Error(ErrorCode::InfeasibleParams,
              "no simple connected pairing after " + std::to_string(kMaxAttempts) + " attempts");
}

Graph barbell(std::size_t cliques, std::size_t size) {
  require(cliques >= 1, "barbell needs at least one clique");
  require(size >= 3, "barbell cliques need size >= 3");
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < cliques; ++c) {
    const auto base = static_cast<NodeId>(c * size);
    for (NodeId i = 0; i < size; ++i) {
      for (NodeId j = i + 1; j < size; ++j) edges.push_back({base + i, base + j});
    }
    if (c + 1 < cliques) {
      edges.push_back({static_cast<NodeId>(base + size - 1), static_cast<NodeId>(base + size)});
    }
  }
  return Graph::from_edge_list(cliques * size, edges);
}

}  // namespace gen

Graph read_edge_list(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw Error(ErrorCode::InvalidInput, "missing 'n m' header");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(in >> u >> v)) {
      throw Error(ErrorCode::InvalidInput, "expected " + std::to_string(m) + " edges, got " +
                                               std::to_string(i));
    }
    if (u < 0 || v < 0 || static_cast<unsigned long long>(u) >= n ||
        static_cast<unsigned long long>(v) >= n) {
      throw Error(ErrorCode::OutOfRange, "edge line " + std::to_string(i + 2) + " out of range");
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::InvalidInput, "trailing data after edge list");
  return Graph::from_edge_list(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace lmix
