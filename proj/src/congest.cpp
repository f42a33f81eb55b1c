#include "lmix/congest.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "lmix/error.hpp"

namespace lmix {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::bfs: return "bfs";
    case Phase::flooding: return "flooding";
    case Phase::selection: return "selection";
  }
  return "unknown";
}

std::uint64_t RoundLedger::rounds() const {
  std::uint64_t total = 0;
  for (auto r : rounds_) total += r;
  return total;
}

std::uint64_t RoundLedger::messages() const {
  std::uint64_t total = 0;
  for (auto m : messages_) total += m;
  return total;
}

Message::Message(NodeId from_node, NodeId to_node, std::initializer_list<Wide> payload)
    : from(from_node), to(to_node) {
  if (payload.size() > words.size()) {
    throw Error(ErrorCode::MessageTooLarge, "message carries more than two words");
  }
  std::copy(payload.begin(), payload.end(), words.begin());
  size = static_cast<std::uint8_t>(payload.size());
}

unsigned Message::bits() const {
  unsigned total = 0;
  for (std::size_t i = 0; i < size; ++i) total += bit_width(words[i]);
  return total;
}

Network::Network(const Graph& g, unsigned key_exponent, RoundLedger& ledger)
    : graph_(&g),
      ledger_(&ledger),
      bit_limit_((key_exponent + 1) * ceil_log2(g.node_count()) + 2) {}

std::vector<Message> Network::exchange(Phase phase, std::vector<Message> outbox) {
  for (const Message& m : outbox) {
    if (m.from >= graph_->node_count() || !graph_->has_edge(m.from, m.to)) {
      throw Error(ErrorCode::InvalidInput, "message " + std::to_string(m.from) + "->" +
                                               std::to_string(m.to) + " is not along an edge");
    }
    const unsigned bits = m.bits();
    if (bits > bit_limit_) {
      throw Error(ErrorCode::MessageTooLarge, std::to_string(bits) + " bits exceeds the " +
                                                  std::to_string(bit_limit_) + "-bit budget");
    }
    ledger_->note_message_bits(bits);
  }
  ledger_->add_round(phase);
  ledger_->add_messages(phase, outbox.size());
  const auto by_recipient = [](const Message& a, const Message& b) {
    return a.to < b.to || (a.to == b.to && a.from < b.from);
  };
  if (!std::is_sorted(outbox.begin(), outbox.end(), by_recipient)) {
    std::sort(outbox.begin(), outbox.end(), by_recipient);
  }
  return outbox;
}

std::size_t BfsTree::size() const {
  std::size_t total = 0;
  for (const auto& level : levels) total += level.size();
  return total;
}

namespace {

bool frontier_can_grow(const Graph& g, const BfsTree& tree) {
  for (NodeId u : tree.levels.back()) {
    for (NodeId v : g.neighbors(u)) {
      if (!tree.contains(v)) return true;
    }
  }
  return false;
}

void grow(Network& net, BfsTree& tree) {
  const Graph& g = net.graph();
  while (tree.realized_depth() < tree.depth_cap && frontier_can_grow(g, tree)) {
    std::vector<Message> outbox;
    for (NodeId u : tree.levels.back()) {
      for (NodeId v : g.neighbors(u)) outbox.emplace_back(u, v, std::initializer_list<Wide>{tree.root});
    }
    const auto inbox = net.exchange(Phase::bfs, std::move(outbox));
    const std::size_t next_depth = tree.realized_depth() + 1;
    std::vector<NodeId> joined;
    for (const Message& m : inbox) {
      if (tree.depth[m.to] == kUnreached) {
        // First (smallest) sender wins; later senders to the same node are ignored.
        tree.depth[m.to] = next_depth;
        tree.parent[m.to] = m.from;
        joined.push_back(m.to);
      }
    }
    for (NodeId v : joined) tree.children[tree.parent[v]].push_back(v);
    tree.levels.push_back(std::move(joined));
  }
  for (auto& kids : tree.children) std::sort(kids.begin(), kids.end());
}

}  // namespace

BfsTree build_bfs(Network& net, NodeId root, std::size_t depth_cap) {
  const std::size_t n = net.graph().node_count();
  if (root >= n) throw Error(ErrorCode::OutOfRange, "BFS root out of range");
  BfsTree tree;
  tree.root = root;
  tree.depth_cap = depth_cap;
  tree.parent.assign(n, kNoParent);
  tree.children.assign(n, {});
  tree.depth.assign(n, kUnreached);
  tree.depth[root] = 0;
  tree.levels.push_back({root});
  grow(net, tree);
  return tree;
}

void extend_bfs(Network& net, BfsTree& tree, std::size_t new_cap) {
  if (new_cap <= tree.depth_cap) return;
  tree.depth_cap = new_cap;
  grow(net, tree);
}

std::vector<std::optional<Wide>> broadcast(Network& net, const BfsTree& tree, Wide value,
                                           Phase phase) {
  std::vector<std::optional<Wide>> received(net.graph().node_count());
  received[tree.root] = value;
  for (std::size_t k = 0; k < tree.realized_depth(); ++k) {
    std::vector<Message> outbox;
    outbox.reserve(tree.levels[k + 1].size());
    for (NodeId u : tree.levels[k]) {
      for (NodeId child : tree.children[u]) outbox.emplace_back(u, child, std::initializer_list<Wide>{*received[u]});
    }
    for (const Message& m : net.exchange(phase, std::move(outbox))) received[m.to] = m.words[0];
  }
  return received;
}

namespace {

using Words = std::array<Wide, 2>;

// Aggregates per-node words up the tree, one level per round.
template <class Local, class Combine>
Words convergecast(Network& net, const BfsTree& tree, Phase phase, std::uint8_t width,
                   Local local, Combine combine) {
  std::vector<Words> agg(net.graph().node_count());
  for (const auto& level : tree.levels) {
    for (NodeId v : level) agg[v] = local(v);
  }
  for (std::size_t k = tree.realized_depth(); k >= 1; --k) {
    std::vector<Message> outbox;
    outbox.reserve(tree.levels[k].size());
    for (NodeId v : tree.levels[k]) {
      Message m;
      m.from = v;
      m.to = tree.parent[v];
      m.words = agg[v];
      m.size = width;
      outbox.push_back(m);
    }
    for (const Message& m : net.exchange(phase, std::move(outbox))) {
      agg[m.to] = combine(agg[m.to], m.words);
    }
  }
  return agg[tree.root];
}

// Broadcast of a two-word instruction; only the round and message cost
// matters since every node applies the same rule.
void broadcast_words(Network& net, const BfsTree& tree, Phase phase, Words value, std::uint8_t width) {
  for (std::size_t k = 0; k < tree.realized_depth(); ++k) {
    std::vector<Message> outbox;
    outbox.reserve(tree.levels[k + 1].size());
    for (NodeId u : tree.levels[k]) {
      for (NodeId child : tree.children[u]) {
        Message m;
        m.from = u;
        m.to = child;
        m.words = value;
        m.size = width;
        outbox.push_back(m);
      }
    }
    net.exchange(phase, std::move(outbox));
  }
}

}  // namespace

Wide converge_sum(Network& net, const BfsTree& tree, std::span<const Wide> values, Phase phase) {
  if (values.size() != net.graph().node_count()) {
    throw Error(ErrorCode::InvalidInput, "one value per node required");
  }
  return convergecast(
      net, tree, phase, 1, [&](NodeId v) { return Words{values[v], 0}; },
      [](Words a, Words b) { return Words{checked_add(a[0], b[0]), 0}; })[0];
}

SelectionResult select_sum_smallest(Network& net, const BfsTree& tree, std::span<const Wide> keys,
                                    std::size_t set_size, std::optional<Wide> outside_key) {
  const std::size_t n = net.graph().node_count();
  if (keys.size() != n) throw Error(ErrorCode::InvalidInput, "one key per node required");
  if (set_size < 1 || set_size > n) throw Error(ErrorCode::OutOfRange, "set size must lie in [1, n]");

  const Phase phase = Phase::selection;
  const std::uint64_t rounds_before = net.ledger().rounds();
  SelectionResult result;

  // Min and subtree size together, then max.
  const Words min_count = convergecast(
      net, tree, phase, 2, [&](NodeId v) { return Words{keys[v], 1}; },
      [](Words a, Words b) { return Words{std::min(a[0], b[0]), a[1] + b[1]}; });
  const Wide tree_max = convergecast(
      net, tree, phase, 1, [&](NodeId v) { return Words{keys[v], 0}; },
      [](Words a, Words b) { return Words{std::max(a[0], b[0]), 0}; })[0];

  const auto tree_count = static_cast<std::size_t>(min_count[1]);
  const std::size_t outside_count = n - tree_count;
  if (outside_count > 0 && !outside_key) {
    throw Error(ErrorCode::InvalidInput, "tree does not span the graph and no outside key was given");
  }
  Wide lo = min_count[0];
  Wide hi = tree_max;
  if (outside_count > 0) {
    lo = std::min(lo, *outside_key);
    hi = std::max(hi, *outside_key);
  }

  std::map<Wide, std::size_t> count_le{{hi, n}};
  auto query_count_le = [&](Wide bound) {
    if (auto it = count_le.find(bound); it != count_le.end()) return it->second;
    broadcast_words(net, tree, phase, {bound, 0}, 1);
    const Wide tree_le = convergecast(
        net, tree, phase, 1, [&](NodeId v) { return Words{keys[v] <= bound ? 1u : 0u, 0}; },
        [](Words a, Words b) { return Words{a[0] + b[0], 0}; })[0];
    std::size_t total = static_cast<std::size_t>(tree_le);
    if (outside_count > 0 && *outside_key <= bound) total += outside_count;
    ++result.search_steps;
    count_le[bound] = total;
    return total;
  };

  const Wide min_key = lo;
  while (lo < hi) {
    const Wide mid = lo + (hi - lo) / 2;
    if (query_count_le(mid) >= set_size) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const Wide threshold = lo;
  const std::size_t count_below = threshold == min_key ? 0 : query_count_le(threshold - 1);
  const std::size_t count_at = query_count_le(threshold);
  const std::size_t need = set_size - count_below;
  const std::size_t ties = count_at - count_below;
  const std::size_t outside_ties = (outside_count > 0 && *outside_key == threshold) ? outside_count : 0;
  const std::size_t tree_ties = ties - outside_ties;

  // Highest id admitted among tree nodes holding the threshold key.
  Wide id_bound = n - 1;
  std::size_t outside_taken_ties = 0;
  if (need == ties) {
    outside_taken_ties = outside_ties;
  } else if (need <= tree_ties) {
    Wide id_lo = 0, id_hi = n - 1;
    while (id_lo < id_hi) {
      const Wide mid = id_lo + (id_hi - id_lo) / 2;
      broadcast_words(net, tree, phase, {threshold, mid}, 2);
      const Wide taken = convergecast(
          net, tree, phase, 1,
          [&](NodeId v) { return Words{(keys[v] == threshold && v <= mid) ? 1u : 0u, 0}; },
          [](Words a, Words b) { return Words{a[0] + b[0], 0}; })[0];
      ++result.search_steps;
      if (taken >= need) {
        id_hi = mid;
      } else {
        id_lo = mid + 1;
      }
    }
    id_bound = id_lo;
  } else {
    outside_taken_ties = need - tree_ties;
  }

  auto qualifies = [&](NodeId v) {
    return keys[v] < threshold || (keys[v] == threshold && v <= id_bound);
  };
  broadcast_words(net, tree, phase, {threshold, id_bound}, 2);
  Wide sum = convergecast(
      net, tree, phase, 1, [&](NodeId v) { return Words{qualifies(v) ? keys[v] : 0, 0}; },
      [](Words a, Words b) { return Words{checked_add(a[0], b[0]), 0}; })[0];

  std::size_t outside_taken = outside_taken_ties;
  if (outside_count > 0 && *outside_key < threshold) outside_taken = outside_count;
  if (outside_taken > 0) sum = checked_add(sum, checked_mul(*outside_key, outside_taken));

  for (const auto& level : tree.levels) {
    for (NodeId v : level) {
      if (qualifies(v)) result.qualified.push_back(v);
    }
  }
  std::sort(result.qualified.begin(), result.qualified.end());

  result.sum = sum;
  result.threshold = threshold;
  result.count_below = count_below;
  result.ties_taken = need;
  result.outside_taken = outside_taken;
  result.rounds = net.ledger().rounds() - rounds_before;
  return result;
}

std::uint64_t selection_round_bound(std::size_t depth, std::size_t n, Wide key_scale) {
  const std::uint64_t key_bits = bit_width(key_scale - 1);
  return 2 * depth * (key_bits + ceil_log2(n)) + 10 * depth;
}

}  // namespace lmix
