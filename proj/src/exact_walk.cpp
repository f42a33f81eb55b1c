#include "lmix/exact_walk.hpp"

#include <string>

#include "lmix/error.hpp"

namespace lmix {

std::vector<std::vector<Rational>> exact_walk(const Graph& g, NodeId source, std::size_t steps,
                                              bool lazy) {
  const std::size_t n = g.node_count();
  if (n > kExactMaxNodes || steps > kExactMaxSteps) {
    throw Error(ErrorCode::InfeasibleParams,
                "exact walk limited to n <= " + std::to_string(kExactMaxNodes) +
                    " and steps <= " + std::to_string(kExactMaxSteps));
  }
  if (source >= n) throw Error(ErrorCode::OutOfRange, "source out of range");

  std::vector<std::vector<Rational>> out;
  out.reserve(steps + 1);
  std::vector<Rational> p(n, Rational(0));
  p[source] = 1;
  out.push_back(p);
  const Rational half(1, 2);
  for (std::size_t t = 1; t <= steps; ++t) {
    std::vector<Rational> next(n, Rational(0));
    for (NodeId u = 0; u < n; ++u) {
      Rational inflow(0);
      for (NodeId v : g.neighbors(u)) inflow += p[v] / static_cast<long long>(g.degree(v));
      next[u] = lazy ? half * p[u] + half * inflow : inflow;
    }
    p = std::move(next);
    out.push_back(p);
  }
  return out;
}

}  // namespace lmix
