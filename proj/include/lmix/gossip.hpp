#pragma once

// Synchronous push-pull gossip. Each node starts with its own token; every
// round each node picks a uniform random neighbor and the two exchange
// their full token sets. Used to measure (delta, beta)-partial information
// spreading empirically.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "lmix/graph.hpp"

namespace lmix {

using TokenSet = boost::dynamic_bitset<std::uint64_t>;

enum class GossipModel {
  // Whole token sets cross an edge in one round.
  local,
  // One token id per edge direction per round.
  congest,
};

struct GossipState {
  std::vector<TokenSet> tokens;  // tokens[v] holds the origin ids v has seen
  std::size_t round = 0;
  std::uint64_t seed = 0;
};

GossipState fresh_state(const Graph& g, std::uint64_t seed);

// Neighbor sampled by node u in round r; a pure function of
// (seed, round, node) so runs replay bit-for-bit.
NodeId sample_neighbor(const Graph& g, std::uint64_t seed, std::size_t round, NodeId u);

// Advances one round against the round-start snapshot.
void push_pull_round(const Graph& g, GossipState& state, GossipModel model = GossipModel::local);

// ceil(n / beta).
std::size_t partial_threshold(std::size_t n, double beta);

// Every token held by >= ceil(n/beta) nodes and every node holding
// >= ceil(n/beta) tokens.
bool check_partial(const GossipState& state, double beta);
bool check_full(const GossipState& state);

struct Coverage {
  std::size_t round = 0;
  std::size_t min_tokens_per_node = 0;
  std::size_t min_holders_per_token = 0;
};

Coverage coverage(const GossipState& state);

struct SpreadReport {
  std::uint64_t seed = 0;
  std::optional<std::size_t> rounds_to_partial;
  std::optional<std::size_t> rounds_to_full;
  bool cap_exceeded = false;
  std::vector<Coverage> histogram;  // round 0 included
};

// Runs until full spreading or `round_cap` rounds. Hitting the cap is
// reported in the result, not thrown.
SpreadReport run_spreading(const Graph& g, double beta, std::uint64_t seed, std::size_t round_cap,
                           GossipModel model = GossipModel::local);

// Fraction of seeds whose run meets the partial condition within `budget`
// rounds; seeds are first_seed, first_seed+1, ...
double success_fraction(const Graph& g, double beta, std::size_t budget, std::size_t seed_count,
                        std::uint64_t first_seed = 0, GossipModel model = GossipModel::local);

// CSV with header "round,min_tokens_per_node,min_holders_per_token".
void write_coverage_csv(std::ostream& out, const std::vector<Coverage>& histogram);

}  // namespace lmix
