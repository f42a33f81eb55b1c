#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lmix/error.hpp"
#include "lmix/fixed_point.hpp"
#include "lmix/gossip.hpp"
#include "lmix/local_mixing.hpp"
#include "lmix/walk_oracle.hpp"

using namespace lmix;

namespace {

std::size_t median(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

}  // namespace

TEST_CASE("two and three node rounds") {
  const Graph k2 = gen::complete(2);
  GossipState s = fresh_state(k2, 5);
  push_pull_round(k2, s);
  CHECK(check_full(s));
  CHECK(s.round == 1);

  const Graph k3 = gen::complete(3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GossipState t = fresh_state(k3, seed);
    push_pull_round(k3, t);
    for (const auto& set : t.tokens) CHECK(set.count() >= 2);
  }
}

TEST_CASE("partial spreading condition") {
  const Graph g = gen::complete(10);
  GossipState s = fresh_state(g, 0);
  CHECK(check_partial(s, 10.0));
  CHECK_FALSE(check_partial(s, 1.0));
  CHECK_FALSE(check_full(s));
  for (auto& set : s.tokens) set.set();
  CHECK(check_full(s));
  for (double beta : {1.0, 2.5, 10.0}) CHECK(check_partial(s, beta));
  CHECK(partial_threshold(10, 4.0) == 3);
  CHECK(partial_threshold(128, 4.0) == 32);
  CHECK_THROWS_AS(partial_threshold(10, 0.5), Error);
}

TEST_CASE("rounds keep own tokens, only grow, and exchange both ways") {
  for (const Graph& g : {gen::barbell(4, 6), gen::cycle(15), gen::random_regular(30, 3, 2)}) {
    for (GossipModel model : {GossipModel::local, GossipModel::congest}) {
      GossipState s = fresh_state(g, 42);
      bool was_partial = false;
      for (int r = 0; r < 25; ++r) {
        const auto before = s.tokens;
        push_pull_round(g, s, model);
        for (NodeId u = 0; u < g.node_count(); ++u) {
          CHECK(s.tokens[u].test(u));
          CHECK(before[u].is_subset_of(s.tokens[u]));
          if (model == GossipModel::local) {
            const NodeId v = sample_neighbor(g, 42, s.round, u);
            CHECK(g.has_edge(u, v));
            CHECK(before[v].is_subset_of(s.tokens[u]));
            CHECK(before[u].is_subset_of(s.tokens[v]));
          }
        }
        const bool now = check_partial(s, 3.0);
        if (was_partial) CHECK(now);
        was_partial = now;
      }
    }
  }
}

TEST_CASE("congest model moves one token per direction") {
  const Graph g = gen::cycle(12);
  GossipState s = fresh_state(g, 3);
  for (int r = 0; r < 10; ++r) {
    const auto before = s.tokens;
    push_pull_round(g, s, GossipModel::congest);
    std::vector<std::size_t> pushes_into(g.node_count(), 0);
    for (NodeId u = 0; u < g.node_count(); ++u) ++pushes_into[sample_neighbor(g, 3, s.round, u)];
    for (NodeId u = 0; u < g.node_count(); ++u) {
      CHECK(s.tokens[u].count() <= before[u].count() + 1 + pushes_into[u]);
    }
  }
  const SpreadReport rep = run_spreading(gen::complete(8), 1.0, 1, 500, GossipModel::congest);
  CHECK(rep.rounds_to_full.has_value());
}

TEST_CASE("sampling is a pure function of seed, round and node") {
  const Graph g = gen::random_regular(20, 4, 1);
  for (NodeId u = 0; u < 20; ++u) {
    CHECK(sample_neighbor(g, 9, 3, u) == sample_neighbor(g, 9, 3, u));
  }
  // All neighbors show up over many rounds.
  std::vector<int> hits(20, 0);
  for (std::size_t r = 1; r <= 400; ++r) ++hits[sample_neighbor(g, 9, r, 0)];
  for (NodeId v : g.neighbors(0)) CHECK(hits[v] > 50);
}

TEST_CASE("spreading reports") {
  const Graph g = gen::barbell(4, 8);
  const SpreadReport a = run_spreading(g, 4.0, 7, 10000);
  const SpreadReport b = run_spreading(g, 4.0, 7, 10000);
  REQUIRE(a.rounds_to_partial.has_value());
  REQUIRE(a.rounds_to_full.has_value());
  CHECK(a.rounds_to_partial == b.rounds_to_partial);
  CHECK(a.rounds_to_full == b.rounds_to_full);
  CHECK(a.histogram.size() == b.histogram.size());
  CHECK(*a.rounds_to_partial <= *a.rounds_to_full);
  CHECK(a.histogram.front().round == 0);
  CHECK(a.histogram.back().round == *a.rounds_to_full);
  CHECK_FALSE(a.cap_exceeded);
  for (std::size_t i = 1; i < a.histogram.size(); ++i) {
    CHECK(a.histogram[i].min_holders_per_token >= a.histogram[i - 1].min_holders_per_token);
    CHECK(a.histogram[i].min_tokens_per_node >= a.histogram[i - 1].min_tokens_per_node);
  }

  const SpreadReport capped = run_spreading(g, 1.0, 7, 1);
  CHECK(capped.cap_exceeded);
  CHECK(capped.histogram.size() == 2);
  CHECK_FALSE(capped.rounds_to_full.has_value());

  std::ostringstream csv;
  write_coverage_csv(csv, capped.histogram);
  CHECK(csv.str().rfind("round,min_tokens_per_node,min_holders_per_token\n0,1,1\n", 0) == 0);
}

TEST_CASE("complete graph spreads fully within twenty rounds") {
  const Graph g = gen::complete(16);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto rep = run_spreading(g, 1.0, seed, 1000);
    REQUIRE(rep.rounds_to_full.has_value());
    CHECK(*rep.rounds_to_full <= 20);
  }
}

TEST_CASE("success fraction") {
  const Graph g = gen::barbell(2, 6);
  CHECK(success_fraction(g, 12.0, 0, 10) == 1.0);
  CHECK(success_fraction(g, 1.0, 0, 10) == 0.0);
  CHECK(success_fraction(g, 1.0, 1000, 10) == 1.0);
  CHECK(success_fraction(g, 2.0, 5, 20, 3) == success_fraction(g, 2.0, 5, 20, 3));
  CHECK_THROWS_AS(success_fraction(g, 2.0, 5, 0), Error);
}

TEST_CASE("partial spreading tracks local mixing while full spreading grows with beta") {
  // n = 48 throughout.
  std::vector<std::size_t> partial_medians, full_medians;
  for (std::size_t beta : {2, 4, 8}) {
    const Graph g = gen::barbell(beta, 48 / beta);
    OracleOptions o;
    o.mode = OracleMode::algorithm_grid;
    std::size_t tau = 0;
    for (NodeId s = 0; s < g.node_count(); s += 5) {
      tau = std::max(tau, local_mixing_oracle(g, s, {static_cast<double>(beta), kDefaultEps, false}, o).tau);
    }
    std::vector<std::size_t> partial, full;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto rep = run_spreading(g, static_cast<double>(beta), seed, 100000);
      partial.push_back(*rep.rounds_to_partial);
      full.push_back(*rep.rounds_to_full);
    }
    partial_medians.push_back(median(partial));
    full_medians.push_back(median(full));
    CHECK(median(partial) <= 12 * tau * ceil_log2(g.node_count()));
  }
  CHECK(full_medians[2] > full_medians[0]);
  CHECK(full_medians[2] > 2 * partial_medians[2]);
}
