#pragma once

// Synchronous CONGEST simulator. A Network delivers one round of messages
// at a time along graph edges, enforces the per-message bit budget and
// charges a RoundLedger. The tree primitives below (BFS by flooding,
// broadcast, convergecast, selection of the R smallest keys) are built only
// from Network::exchange, so their round counts are what a real execution
// would spend.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lmix/fixed_point.hpp"
#include "lmix/graph.hpp"

namespace lmix {

enum class Phase : std::uint8_t { bfs, flooding, selection };
inline constexpr std::size_t kPhaseCount = 3;
std::string_view to_string(Phase phase);

class RoundLedger {
 public:
  void add_round(Phase phase) { ++rounds_[index(phase)]; }
  void add_messages(Phase phase, std::uint64_t count) { messages_[index(phase)] += count; }
  void note_message_bits(unsigned bits) { max_message_bits_ = std::max(max_message_bits_, bits); }

  std::uint64_t rounds() const;
  std::uint64_t rounds(Phase phase) const { return rounds_[index(phase)]; }
  std::uint64_t messages() const;
  std::uint64_t messages(Phase phase) const { return messages_[index(phase)]; }
  unsigned max_message_bits() const { return max_message_bits_; }

 private:
  static std::size_t index(Phase phase) { return static_cast<std::size_t>(phase); }

  std::array<std::uint64_t, kPhaseCount> rounds_{};
  std::array<std::uint64_t, kPhaseCount> messages_{};
  unsigned max_message_bits_ = 0;
};

struct Message {
  NodeId from = 0;
  NodeId to = 0;
  std::array<Wide, 2> words{};
  std::uint8_t size = 0;

  Message() = default;
  Message(NodeId from_node, NodeId to_node, std::initializer_list<Wide> payload);
  unsigned bits() const;
};

class Network {
 public:
  // `key_exponent` is the grid exponent of the largest values that travel on
  // the wire (c, or c+2 with perturbed keys). The bit budget per message is
  // (key_exponent + 1) * ceil(log2 n) + 2.
  Network(const Graph& g, unsigned key_exponent, RoundLedger& ledger);

  const Graph& graph() const { return *graph_; }
  RoundLedger& ledger() { return *ledger_; }
  unsigned message_bit_limit() const { return bit_limit_; }

  // One synchronous round. Every message must travel along an edge and fit
  // the bit budget (MessageTooLarge otherwise). Returns the delivered
  // messages ordered by (recipient, sender).
  std::vector<Message> exchange(Phase phase, std::vector<Message> outbox);

 private:
  const Graph* graph_;
  RoundLedger* ledger_;
  unsigned bit_limit_;
};

inline constexpr NodeId kNoParent = std::numeric_limits<NodeId>::max();
inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

struct BfsTree {
  NodeId root = 0;
  std::size_t depth_cap = 0;
  std::vector<NodeId> parent;                 // kNoParent for the root and unreached nodes
  std::vector<std::vector<NodeId>> children;  // ascending ids
  std::vector<std::size_t> depth;             // kUnreached outside the tree
  std::vector<std::vector<NodeId>> levels;    // levels[k]: nodes at depth k, ascending

  std::size_t realized_depth() const { return levels.size() - 1; }
  std::size_t size() const;
  bool contains(NodeId v) const { return depth[v] != kUnreached; }
};

// Flooding BFS from `root`, truncated at `depth_cap`. A node joining in a
// round adopts the smallest-id sender as parent. Charges one round per
// realized level; flooding stops once the root's eccentricity is reached.
BfsTree build_bfs(Network& net, NodeId root, std::size_t depth_cap);

// Grows an existing tree to a larger cap, charging only the new levels.
void extend_bfs(Network& net, BfsTree& tree, std::size_t new_cap);

// Root-to-leaves broadcast; costs realized_depth rounds. Entry v holds the
// value delivered to v (nullopt outside the tree).
std::vector<std::optional<Wide>> broadcast(Network& net, const BfsTree& tree, Wide value,
                                           Phase phase = Phase::selection);

// Leaves-to-root sum of per-node values over the tree; costs realized_depth
// rounds.
Wide converge_sum(Network& net, const BfsTree& tree, std::span<const Wide> values,
                  Phase phase = Phase::selection);

struct SelectionResult {
  Wide sum = 0;
  Wide threshold = 0;           // key of the R-th smallest
  std::size_t count_below = 0;  // keys strictly below threshold
  std::size_t ties_taken = 0;   // keys equal to threshold that qualify
  std::size_t outside_taken = 0;
  std::vector<NodeId> qualified;  // qualifying tree nodes, ascending
  std::size_t search_steps = 0;
  std::uint64_t rounds = 0;
};

// Exact sum of the R smallest keys, learned by the root through repeated
// broadcast/convergecast: min/max, binary search on the integer key grid for
// the threshold, then rank selection among threshold ties by smallest id.
//
// Nodes outside the tree (walks shorter than the diameter leave them
// unreached) all hold `outside_key`; the root knows n, so it accounts for
// them arithmetically. They rank after tree nodes among equal keys.
SelectionResult select_sum_smallest(Network& net, const BfsTree& tree, std::span<const Wide> keys,
                                    std::size_t set_size,
                                    std::optional<Wide> outside_key = std::nullopt);

// 2 d (ceil(log2 key_scale) + ceil(log2 n)) + 10 d.
std::uint64_t selection_round_bound(std::size_t depth, std::size_t n, Wide key_scale);

}  // namespace lmix
