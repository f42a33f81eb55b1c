#include "lmix/gossip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "lmix/error.hpp"

namespace lmix {

namespace {

// SplitMix64 stream keyed by (seed, round, node, purpose).
class KeyedEngine {
 public:
  using result_type = std::uint64_t;

  KeyedEngine(std::uint64_t seed, std::uint64_t round, std::uint64_t node, std::uint64_t purpose)
      : state_(seed) {
    state_ = mix(state_ ^ mix(round + 0x9e3779b97f4a7c15ULL));
    state_ = mix(state_ ^ mix(node + 0xbf58476d1ce4e5b9ULL));
    state_ = mix(state_ ^ mix(purpose + 0x94d049bb133111ebULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

constexpr std::uint64_t kNeighborStream = 1;
constexpr std::uint64_t kPushTokenStream = 2;
constexpr std::uint64_t kPullTokenStream = 3;

// A uniformly chosen member of a non-empty set.
std::size_t pick_token(const TokenSet& set, KeyedEngine& engine) {
  std::uniform_int_distribution<std::size_t> pick(0, set.count() - 1);
  std::size_t skip = pick(engine);
  std::size_t bit = set.find_first();
  while (skip-- > 0) bit = set.find_next(bit);
  return bit;
}

}  // namespace

GossipState fresh_state(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  GossipState state;
  state.tokens.assign(n, TokenSet(n));
  for (std::size_t v = 0; v < n; ++v) state.tokens[v].set(v);
  state.seed = seed;
  return state;
}

NodeId sample_neighbor(const Graph& g, std::uint64_t seed, std::size_t round, NodeId u) {
  const auto nb = g.neighbors(u);
  if (nb.empty()) throw Error(ErrorCode::Disconnected, "isolated node cannot gossip");
  KeyedEngine engine(seed, round, u, kNeighborStream);
  std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
  return nb[pick(engine)];
}

void push_pull_round(const Graph& g, GossipState& state, GossipModel model) {
  const std::size_t n = g.node_count();
  const std::vector<TokenSet> snapshot = state.tokens;
  const std::size_t round = state.round + 1;
  for (NodeId u = 0; u < n; ++u) {
    const NodeId v = sample_neighbor(g, state.seed, round, u);
    if (model == GossipModel::local) {
      state.tokens[u] |= snapshot[v];
      state.tokens[v] |= snapshot[u];
    } else {
      KeyedEngine push(state.seed, round, u, kPushTokenStream);
      KeyedEngine pull(state.seed, round, u, kPullTokenStream);
      state.tokens[v].set(pick_token(snapshot[u], push));
      state.tokens[u].set(pick_token(snapshot[v], pull));
    }
  }
  state.round = round;
}

std::size_t partial_threshold(std::size_t n, double beta) {
  if (!(beta >= 1.0)) throw Error(ErrorCode::InfeasibleParams, "beta must be >= 1");
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) / beta));
}

Coverage coverage(const GossipState& state) {
  const std::size_t n = state.tokens.size();
  Coverage c;
  c.round = state.round;
  c.min_tokens_per_node = n;
  std::vector<std::size_t> holders(n, 0);
  for (const TokenSet& set : state.tokens) {
    c.min_tokens_per_node = std::min(c.min_tokens_per_node, set.count());
    for (auto bit = set.find_first(); bit != TokenSet::npos; bit = set.find_next(bit)) ++holders[bit];
  }
  c.min_holders_per_token = n == 0 ? 0 : *std::min_element(holders.begin(), holders.end());
  return c;
}

bool check_partial(const GossipState& state, double beta) {
  const std::size_t need = partial_threshold(state.tokens.size(), beta);
  const Coverage c = coverage(state);
  return c.min_tokens_per_node >= need && c.min_holders_per_token >= need;
}

bool check_full(const GossipState& state) {
  return std::all_of(state.tokens.begin(), state.tokens.end(),
                     [](const TokenSet& set) { return set.all(); });
}

SpreadReport run_spreading(const Graph& g, double beta, std::uint64_t seed, std::size_t round_cap,
                           GossipModel model) {
  const std::size_t need = partial_threshold(g.node_count(), beta);
  SpreadReport report;
  report.seed = seed;
  GossipState state = fresh_state(g, seed);
  for (;;) {
    const Coverage c = coverage(state);
    report.histogram.push_back(c);
    if (!report.rounds_to_partial && c.min_tokens_per_node >= need && c.min_holders_per_token >= need) {
      report.rounds_to_partial = state.round;
    }
    if (c.min_tokens_per_node == g.node_count()) {
      report.rounds_to_full = state.round;
      break;
    }
    if (state.round >= round_cap) {
      report.cap_exceeded = true;
      break;
    }
    push_pull_round(g, state, model);
  }
  return report;
}

double success_fraction(const Graph& g, double beta, std::size_t budget, std::size_t seed_count,
                        std::uint64_t first_seed, GossipModel model) {
  if (seed_count == 0) throw Error(ErrorCode::InfeasibleParams, "need at least one seed");
  std::size_t successes = 0;
  for (std::size_t i = 0; i < seed_count; ++i) {
    GossipState state = fresh_state(g, first_seed + i);
    bool ok = check_partial(state, beta);
    while (!ok && state.round < budget) {
      push_pull_round(g, state, model);
      ok = check_partial(state, beta);
    }
    if (ok) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(seed_count);
}

void write_coverage_csv(std::ostream& out, const std::vector<Coverage>& histogram) {
  out << "round,min_tokens_per_node,min_holders_per_token\n";
  for (const Coverage& c : histogram) {
    out << c.round << ',' << c.min_tokens_per_node << ',' << c.min_holders_per_token << '\n';
  }
}

}  // namespace lmix
