#include "lmix/local_mixing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lmix/error.hpp"
#include "lmix/rw_estimate.hpp"
#include "lmix/walk_oracle.hpp"

namespace lmix {

namespace {

constexpr double kThresholdFactor = 4.0;

void validate(const Graph& g, NodeId source, const LocalMixingOptions& options) {
  if (source >= g.node_count()) throw Error(ErrorCode::OutOfRange, "source out of range");
  if (!(options.beta >= 1.0)) throw Error(ErrorCode::InfeasibleParams, "beta must be >= 1");
  if (!(options.eps > 0.0 && options.eps < 1.0)) {
    throw Error(ErrorCode::InfeasibleParams, "eps must lie in (0, 1)");
  }
  if (options.eps_grid && !(*options.eps_grid > 0.0)) {
    throw Error(ErrorCode::InfeasibleParams, "grid ratio must be > 0");
  }
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  check_flood_graph(g, {options.lazy, options.allow_irregular});
  if (!options.lazy && g.is_bipartite()) {
    throw Error(ErrorCode::BipartiteWithoutLazy, "simple walk on a bipartite graph never mixes");
  }
  // Fails early if n^c does not fit.
  grid_scale(g.node_count(), options.perturb ? options.c + 2 : options.c);
}

// Runs the grid checks for one walk length on the current tree.
class GridChecker {
 public:
  GridChecker(const Graph& g, const LocalMixingOptions& options)
      : options_(options),
        n_(g.node_count()),
        grid_(make_grid(n_, options.beta, options.eps_grid.value_or(options.eps))),
        spread_(options.perturb ? static_cast<Wide>(n_) * n_ : 1),
        rng_(options.perturb_seed) {
    key_scale_ = checked_mul(grid_scale(n_, options.c), spread_);
  }

  const SetSizeGrid& grid() const { return grid_; }
  Wide key_scale() const { return key_scale_; }

  struct Hit {
    std::size_t set_size;
    Wide gap_raw;
  };

  std::optional<Hit> run(Network& net, const BfsTree& tree, const FixedDist& dist) {
    std::vector<Wide> keys(n_);
    for (std::size_t i = 0; i < grid_.sizes.size(); ++i) {
      const std::size_t r = grid_.sizes[i];
      const Wide target = round_to_grid({1, r}, n_, options_.c);
      for (NodeId u = 0; u < n_; ++u) {
        const Wide w = dist.raw[u];
        keys[u] = checked_mul(w > target ? w - target : target - w, spread_);
        if (options_.perturb) keys[u] = checked_add(keys[u], perturbation());
      }
      // Unreached nodes hold w = 0 and stay unperturbed: they cannot talk.
      const auto sel =
          select_sum_smallest(net, tree, keys, r, checked_mul(target, spread_));
      const double factor = (i == 0 && options_.strict_first) ? 1.0 : kThresholdFactor;
      const long double limit =
          static_cast<long double>(factor * options_.eps) * static_cast<long double>(key_scale_);
      if (static_cast<long double>(sel.sum) < limit) return Hit{r, sel.sum};
    }
    return std::nullopt;
  }

 private:
  Wide perturbation() {
    // [1/n^8, 1/n^4] in units of 1/n^(c+2).
    const unsigned c = options_.c;
    Wide lo = 1, hi = 1;
    for (unsigned i = 0; i + 6 < c; ++i) lo = checked_mul(lo, n_);
    for (unsigned i = 0; i + 2 < c; ++i) hi = checked_mul(hi, n_);
    std::uniform_int_distribution<std::uint64_t> dist(static_cast<std::uint64_t>(lo),
                                                      static_cast<std::uint64_t>(hi));
    return dist(rng_);
  }

  const LocalMixingOptions& options_;
  std::size_t n_;
  SetSizeGrid grid_;
  Wide spread_;
  Wide key_scale_ = 1;
  std::mt19937_64 rng_;
};

LocalMixingResult finish(LocalMixingMode mode, std::size_t ell, const GridChecker::Hit& hit,
                         const GridChecker& checker, RoundLedger ledger, std::size_t iterations,
                         std::size_t depth) {
  LocalMixingResult result;
  result.ell = ell;
  result.set_size = hit.set_size;
  result.gap_raw = hit.gap_raw;
  result.gap_scale = checker.key_scale();
  result.gap = to_double(hit.gap_raw) / to_double(checker.key_scale());
  result.ledger = ledger;
  result.mode = mode;
  result.schedule = checker.grid();
  result.iterations = iterations;
  result.tree_depth = depth;
  return result;
}

unsigned wire_exponent(const LocalMixingOptions& options) {
  return options.perturb ? options.c + 2 : options.c;
}

}  // namespace

LocalMixingResult approx_local_mixing(const Graph& g, NodeId source,
                                      const LocalMixingOptions& options) {
  validate(g, source, options);
  const FloodOptions flood{options.lazy, options.allow_irregular};
  const std::uint64_t cap = step_cap(g.node_count());

  RoundLedger ledger;
  Network net(g, wire_exponent(options), ledger);
  GridChecker checker(g, options);
  std::size_t iterations = 0;
  for (std::uint64_t ell = 1; ell <= cap; ell *= 2) {
    ++iterations;
    const BfsTree tree = build_bfs(net, source, ell);
    const FixedDist dist = run_estimate_rw_probability(net, source, ell, options.c, flood);
    if (auto hit = checker.run(net, tree, dist)) {
      return finish(LocalMixingMode::approx2, ell, *hit, checker, ledger, iterations,
                    tree.realized_depth());
    }
  }
  throw Error(ErrorCode::ExceededCap, "walk length exceeded " + std::to_string(cap));
}

LocalMixingResult exact_local_mixing(const Graph& g, NodeId source,
                                     const LocalMixingOptions& options) {
  validate(g, source, options);
  const FloodOptions flood{options.lazy, options.allow_irregular};
  const std::uint64_t cap = step_cap(g.node_count());

  RoundLedger ledger;
  Network net(g, wire_exponent(options), ledger);
  GridChecker checker(g, options);
  FixedDist dist = fixed_point_mass(g, source, options.c);
  BfsTree tree = build_bfs(net, source, 0);
  for (std::uint64_t ell = 1; ell <= cap; ++ell) {
    flood_step(net, dist, flood);
    if (options.bfs == BfsStrategy::incremental) {
      extend_bfs(net, tree, ell);
    } else {
      tree = build_bfs(net, source, ell);
    }
    if (auto hit = checker.run(net, tree, dist)) {
      return finish(LocalMixingMode::exact, ell, *hit, checker, ledger, ell,
                    tree.realized_depth());
    }
  }
  throw Error(ErrorCode::ExceededCap, "walk length exceeded " + std::to_string(cap));
}

double approx_round_bound(std::size_t n, std::size_t ell, std::size_t grid_size) {
  const double log_n = std::log2(static_cast<double>(n));
  return 64.0 * static_cast<double>(ell) * log_n * log_n * static_cast<double>(grid_size);
}

double exact_round_bound(std::size_t n, std::size_t ell, std::size_t diameter,
                         std::size_t grid_size) {
  const double log_n = std::log2(static_cast<double>(n));
  return 64.0 * static_cast<double>(ell) * static_cast<double>(std::min(ell, diameter)) * log_n *
         static_cast<double>(grid_size);
}

}  // namespace lmix
