#include "lmix/rw_estimate.hpp"

#include "lmix/error.hpp"

namespace lmix {

namespace {

// Running exact sum of raw/degree fractions.
class InflowSum {
 public:
  void add(Wide raw, std::uint64_t degree) {
    const Wide g = gcd(den_, degree);
    const Wide lcm = checked_mul(den_ / g, degree);
    num_ = checked_add(checked_mul(num_, lcm / den_), checked_mul(raw, lcm / degree));
    den_ = lcm;
  }

  // nint of the inflow, or of (own + inflow) / 2 for the lazy walk.
  Wide rounded(Wide own, bool lazy) const {
    if (!lazy) return round_half_up(num_, den_);
    return round_half_up(checked_add(checked_mul(own, den_), num_), checked_mul(den_, 2));
  }

 private:
  Wide num_ = 0;
  Wide den_ = 1;
};

}  // namespace

Wide FixedDist::total() const {
  Wide sum = 0;
  for (Wide r : raw) sum = checked_add(sum, r);
  return sum;
}

void check_flood_graph(const Graph& g, const FloodOptions& options) {
  if (!options.allow_irregular && !g.regular_degree()) {
    throw Error(ErrorCode::NotRegular, "distributed walk estimation requires a regular graph");
  }
}

FixedDist fixed_point_mass(const Graph& g, NodeId source, unsigned c) {
  if (source >= g.node_count()) throw Error(ErrorCode::OutOfRange, "source out of range");
  FixedDist d;
  d.n = g.node_count();
  d.c = c;
  d.scale = grid_scale(d.n, c);
  d.raw.assign(d.n, 0);
  d.raw[source] = d.scale;
  d.source = source;
  return d;
}

void flood_step(Network& net, FixedDist& dist, const FloodOptions& options) {
  const Graph& g = net.graph();
  std::vector<Message> outbox;
  for (NodeId u = 0; u < dist.n; ++u) {
    if (dist.raw[u] == 0) continue;
    for (NodeId v : g.neighbors(u)) {
      outbox.emplace_back(u, v, std::initializer_list<Wide>{dist.raw[u], g.degree(u)});
    }
  }
  const auto inbox = net.exchange(Phase::flooding, std::move(outbox));

  std::vector<InflowSum> inflow(dist.n);
  for (const Message& m : inbox) {
    inflow[m.to].add(m.words[0], static_cast<std::uint64_t>(m.words[1]));
  }
  for (NodeId u = 0; u < dist.n; ++u) dist.raw[u] = inflow[u].rounded(dist.raw[u], options.lazy);
  ++dist.step;
}

FixedDist run_estimate_rw_probability(Network& net, NodeId source, std::size_t length, unsigned c,
                                      const FloodOptions& options) {
  check_flood_graph(net.graph(), options);
  FixedDist dist = fixed_point_mass(net.graph(), source, c);
  for (std::size_t t = 0; t < length; ++t) flood_step(net, dist, options);
  return dist;
}

FixedDist replay_estimate_centralized(const Graph& g, NodeId source, std::size_t length, unsigned c,
                                      const FloodOptions& options) {
  check_flood_graph(g, options);
  FixedDist dist = fixed_point_mass(g, source, c);
  for (std::size_t t = 0; t < length; ++t) {
    std::vector<Wide> next(dist.n);
    for (NodeId u = 0; u < dist.n; ++u) {
      InflowSum inflow;
      for (NodeId v : g.neighbors(u)) {
        if (dist.raw[v] != 0) inflow.add(dist.raw[v], g.degree(v));
      }
      next[u] = inflow.rounded(dist.raw[u], options.lazy);
    }
    dist.raw = std::move(next);
    ++dist.step;
  }
  return dist;
}

}  // namespace lmix
