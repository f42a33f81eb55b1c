#include <doctest.h>

#include <random>

#include "lmix/congest.hpp"
#include "lmix/error.hpp"
#include "lmix/exact_walk.hpp"
#include "lmix/fixed_point.hpp"
#include "lmix/rw_estimate.hpp"
#include "oracles.hpp"

using namespace lmix;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

Wide pow_wide(std::size_t base, unsigned e) {
  Wide r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

Wide wide_diff(Wide a, Wide b) { return a > b ? a - b : b - a; }

FloodOptions irregular_ok() { return {false, true}; }

}  // namespace

TEST_CASE("round to grid") {
  CHECK(round_to_grid({1234567, 10000000}, 10, 6) == 123457);
  CHECK(round_to_grid({0, 1}, 10, 6) == 0);
  const Wide scale = grid_scale(10, 6);
  CHECK(round_to_grid({3, 2 * scale}, 10, 6) == 2);
  CHECK(round_to_grid({5, 2 * scale}, 10, 6) == 3);
  CHECK(round_to_grid({7, 3}, 10, 6) == 2333333);
  CHECK(round_to_grid({1, 1}, 10, 6) == scale);

  CHECK(round_half_up(5, 2) == 3);
  CHECK(round_half_up(4, 3) == 1);
  CHECK(round_half_up(5, 3) == 2);
  CHECK(code_of([] { round_half_up(1, 0); }) == ErrorCode::InvalidInput);
}

TEST_CASE("grid scale and checked arithmetic") {
  CHECK(grid_scale(3, 6) == 729);
  CHECK(grid_scale(128, 6) == pow_wide(128, 6));
  CHECK(code_of([] { grid_scale(10, 5); }) == ErrorCode::InfeasibleParams);
  CHECK(code_of([] { grid_scale(1u << 20, 6); }) == ErrorCode::Overflow);
  const Wide big = ~Wide{0};
  CHECK(code_of([&] { checked_add(big, 1); }) == ErrorCode::Overflow);
  CHECK(code_of([&] { checked_mul(big / 2 + 1, 2); }) == ErrorCode::Overflow);
  CHECK(checked_mul(0, big) == 0);
  CHECK(gcd(12, 18) == 6);
  CHECK(bit_width(0) == 1);
  CHECK(bit_width(255) == 8);
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(64) == 6);
  CHECK(ceil_log2(65) == 7);
  CHECK(to_string(pow_wide(10, 30)) == "1" + std::string(30, '0'));
  CHECK(to_string(0) == "0");
}

TEST_CASE("estimate on K_3 for one step") {
  const Graph k3 = gen::complete(3);
  RoundLedger ledger;
  Network net(k3, 6, ledger);
  const FixedDist d = run_estimate_rw_probability(net, 0, 1, 6);
  CHECK(d.scale == 729);
  CHECK(d.raw == std::vector<Wide>{0, 365, 365});
  CHECK(ledger.rounds() == 1);
  CHECK(ledger.rounds(Phase::flooding) == 1);
  CHECK(ledger.messages() == 2);

  const FixedDist zero = replay_estimate_centralized(k3, 2, 0, 6);
  CHECK(zero.raw == std::vector<Wide>{0, 0, 729});
}

TEST_CASE("simulated estimate equals the centralized replay bit for bit") {
  struct Case {
    Graph g;
    std::size_t length;
    FloodOptions opts;
  };
  const std::vector<Case> cases{{gen::complete(3), 1, {}},
                                {gen::cycle(5), 2, {}},
                                {gen::cycle(5), 10, {}},
                                {gen::barbell(2, 4), 20, irregular_ok()},
                                {gen::random_regular(32, 4, 3), 50, {}},
                                {gen::cycle(8), 30, {true, false}}};
  for (const Case& c : cases) {
    for (NodeId s : {NodeId{0}, NodeId{2}}) {
      RoundLedger ledger;
      Network net(c.g, 6, ledger);
      const FixedDist sim = run_estimate_rw_probability(net, s, c.length, 6, c.opts);
      const FixedDist rep = replay_estimate_centralized(c.g, s, c.length, 6, c.opts);
      CHECK(sim.raw == rep.raw);
      CHECK(sim.step == c.length);
      CHECK(ledger.rounds(Phase::flooding) == c.length);
      CHECK(ledger.max_message_bits() <= net.message_bit_limit());
      CHECK(net.message_bit_limit() == 7 * ceil_log2(c.g.node_count()) + 2);
    }
  }
}

TEST_CASE("flooding refuses irregular graphs unless allowed") {
  const Graph g = gen::barbell(2, 4);
  RoundLedger ledger;
  Network net(g, 6, ledger);
  CHECK(code_of([&] { run_estimate_rw_probability(net, 0, 3, 6); }) == ErrorCode::NotRegular);
  CHECK(code_of([&] { run_estimate_rw_probability(net, 9, 3, 6, irregular_ok()); }) ==
        ErrorCode::OutOfRange);
}

TEST_CASE("rounding error stays below t / n^c against exact rationals") {
  for (const Graph& g : {gen::complete(8), gen::cycle(9), gen::barbell(2, 8), gen::cycle(16)}) {
    const std::size_t n = g.node_count();
    const bool lazy = g.is_bipartite();
    const FloodOptions opts{lazy, true};
    const auto exact = exact_walk(g, 0, kExactMaxSteps, lazy);
    const Wide scale = grid_scale(n, 6);
    FixedDist w = fixed_point_mass(g, 0, 6);
    RoundLedger ledger;
    Network net(g, 6, ledger);
    for (std::size_t t = 1; t <= kExactMaxSteps; ++t) {
      flood_step(net, w, opts);
      for (NodeId u = 0; u < n; ++u) {
        // |raw/scale - p| < t/scale  <=>  |raw * den - num * scale| < t * den
        const Rational& p = exact[t][u];
        const oracle::cpp_rational lhs =
            abs(oracle::cpp_rational(to_string(w.raw[u])) - p * oracle::cpp_rational(to_string(scale)));
        CHECK(lhs < oracle::cpp_rational(static_cast<long long>(t)));
      }
      // Each node rounds once per step, by at most half a grid unit.
      const Wide drift = wide_diff(w.total(), scale);
      CHECK(2 * drift <= static_cast<Wide>(t) * n);
    }
  }
}

TEST_CASE("BFS trees") {
  {
    const Graph k5 = gen::complete(5);
    RoundLedger ledger;
    Network net(k5, 6, ledger);
    const BfsTree t = build_bfs(net, 0, 10);
    CHECK(t.realized_depth() == 1);
    CHECK(t.children[0] == std::vector<NodeId>{1, 2, 3, 4});
    CHECK(t.parent[0] == kNoParent);
    CHECK(ledger.rounds(Phase::bfs) == 1);
  }
  {
    const Graph p5 = gen::path(5);
    RoundLedger ledger;
    Network net(p5, 6, ledger);
    BfsTree t = build_bfs(net, 0, 2);
    CHECK(t.size() == 3);
    CHECK(t.contains(2));
    CHECK_FALSE(t.contains(3));
    CHECK(ledger.rounds() == 2);
    extend_bfs(net, t, 3);
    CHECK(t.size() == 4);
    CHECK(ledger.rounds() == 3);
    extend_bfs(net, t, 10);
    CHECK(t.size() == 5);
    CHECK(t.realized_depth() == 4);
    CHECK(ledger.rounds() == 4);
  }
  {
    const Graph c6 = gen::cycle(6);
    RoundLedger ledger;
    Network net(c6, 6, ledger);
    const BfsTree t = build_bfs(net, 0, 100);
    CHECK(t.realized_depth() == 3);
    CHECK(t.parent[3] == 2);  // both 2 and 4 reach node 3; the smaller wins
    CHECK(ledger.rounds() == 3);
  }
  {
    const Graph g = gen::random_regular(40, 3, 8);
    RoundLedger ledger;
    Network net(g, 6, ledger);
    const BfsTree t = build_bfs(net, 5, 100);
    CHECK(t.size() == 40);
    CHECK(t.realized_depth() == g.eccentricity(5));
    CHECK(ledger.rounds() == t.realized_depth());
    for (NodeId v = 0; v < 40; ++v) {
      if (v == 5) continue;
      CHECK(t.depth[v] == t.depth[t.parent[v]] + 1);
      CHECK(g.has_edge(v, t.parent[v]));
      NodeId smallest = kNoParent;
      for (NodeId u : g.neighbors(v)) {
        if (t.depth[u] + 1 == t.depth[v]) smallest = std::min(smallest, u);
      }
      CHECK(t.parent[v] == smallest);
    }
  }
}

TEST_CASE("broadcast and convergecast") {
  const Graph k4 = gen::complete(4);
  RoundLedger ledger;
  Network net(k4, 6, ledger);
  const BfsTree t = build_bfs(net, 0, 5);
  const std::uint64_t before = ledger.rounds();
  const std::vector<Wide> ones(4, 1);
  CHECK(converge_sum(net, t, ones) == 4);
  CHECK(ledger.rounds() == before + 1);

  const auto got = broadcast(net, t, 77);
  std::vector<Wide> echo;
  for (const auto& v : got) echo.push_back(v.value_or(0));
  CHECK(converge_sum(net, t, echo) == 4 * 77);
  CHECK(ledger.rounds() == before + 3);

  const Graph p5 = gen::path(5);
  RoundLedger pl;
  Network pn(p5, 6, pl);
  const BfsTree pt = build_bfs(pn, 0, 10);
  const std::uint64_t b2 = pl.rounds();
  const std::vector<Wide> vals{1, 2, 3, 4, 5};
  CHECK(converge_sum(pn, pt, vals) == 15);
  CHECK(pl.rounds() == b2 + 4);
  CHECK(pl.rounds() == pl.rounds(Phase::bfs) + pl.rounds(Phase::flooding) + pl.rounds(Phase::selection));
}

TEST_CASE("network enforces edges and message size") {
  const Graph p4 = gen::path(4);
  RoundLedger ledger;
  Network net(p4, 6, ledger);
  CHECK(code_of([&] { net.exchange(Phase::selection, {Message(0, 2, {1})}); }) ==
        ErrorCode::InvalidInput);
  const Wide huge = Wide{1} << 100;
  CHECK(code_of([&] { net.exchange(Phase::selection, {Message(0, 1, {huge})}); }) ==
        ErrorCode::MessageTooLarge);
  CHECK(code_of([] { Message(0, 1, {1, 2, 3}); }) == ErrorCode::MessageTooLarge);
  const auto out = net.exchange(Phase::selection, {Message(2, 1, {5}), Message(0, 1, {6})});
  REQUIRE(out.size() == 2);
  CHECK(out[0].from == 0);
  CHECK(ledger.rounds() == 1);
  CHECK(ledger.messages() == 2);
}

TEST_CASE("selection examples") {
  const Graph k4 = gen::complete(4);
  const Wide scale = grid_scale(4, 6);
  {
    RoundLedger ledger;
    Network net(k4, 6, ledger);
    const BfsTree t = build_bfs(net, 0, 4);
    const std::vector<Wide> keys{0, scale * 4 / 10, scale * 2 / 10, scale * 4 / 10};
    const auto r = select_sum_smallest(net, t, keys, 2);
    CHECK(r.sum == scale * 2 / 10);
    CHECK(r.qualified == std::vector<NodeId>{0, 2});
  }
  {
    RoundLedger ledger;
    Network net(k4, 6, ledger);
    const BfsTree t = build_bfs(net, 0, 4);
    const std::vector<Wide> keys(4, scale / 10);
    const auto r = select_sum_smallest(net, t, keys, 3);
    CHECK(r.sum == 3 * (scale / 10));
    CHECK(r.qualified == std::vector<NodeId>{0, 1, 2});
    CHECK(r.ties_taken == 3);
    CHECK(r.count_below == 0);
  }
  {
    RoundLedger ledger;
    Network net(k4, 6, ledger);
    const BfsTree t = build_bfs(net, 0, 4);
    const std::vector<Wide> keys(4, 0);
    CHECK(code_of([&] { select_sum_smallest(net, t, keys, 5); }) == ErrorCode::OutOfRange);
  }
}

TEST_CASE("selection equals sort-and-sum on seeded key sets") {
  std::mt19937_64 rng(2024);
  const std::vector<Graph> graphs{gen::random_regular(64, 4, 1), gen::cycle(33), gen::barbell(4, 8),
                                  gen::path(20)};
  for (const Graph& g : graphs) {
    const std::size_t n = g.node_count();
    const Wide scale = grid_scale(n, 6);
    for (int trial = 0; trial < 100; ++trial) {
      // Small key ranges force many ties; large ranges exercise the search.
      const std::uint64_t range = (trial % 3 == 0) ? 4 : static_cast<std::uint64_t>(scale);
      std::vector<Wide> keys(n);
      for (auto& k : keys) k = rng() % range;
      const std::size_t r = 1 + rng() % n;
      const NodeId root = static_cast<NodeId>(rng() % n);
      const std::size_t cap = (trial % 4 == 0) ? 1 + rng() % 3 : n;
      RoundLedger ledger;
      Network net(g, 6, ledger);
      const BfsTree t = build_bfs(net, root, cap);
      std::optional<Wide> outside;
      std::vector<Wide> effective = keys;
      if (t.size() < n) {
        outside = rng() % range;
        for (NodeId v = 0; v < n; ++v) {
          if (!t.contains(v)) effective[v] = *outside;
        }
      }
      const auto res = select_sum_smallest(net, t, effective, r, outside);
      CHECK(res.sum == oracle::sum_of_smallest(effective, r));
      CHECK(res.qualified.size() + res.outside_taken == r);
      CHECK(res.rounds <= selection_round_bound(t.realized_depth(), n, scale));
      CHECK(ledger.rounds(Phase::selection) == res.rounds);
      CHECK(ledger.max_message_bits() <= net.message_bit_limit());
      // Qualified tree nodes are exactly those below the threshold plus the
      // smallest-id ties.
      for (NodeId v : res.qualified) CHECK(effective[v] <= res.threshold);
      for (NodeId v = 0; v < n; ++v) {
        if (t.contains(v) && effective[v] < res.threshold) {
          CHECK(std::binary_search(res.qualified.begin(), res.qualified.end(), v));
        }
      }
    }
  }
}
