#pragma once

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lmix/graph.hpp"

namespace lmix {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kExactMaxNodes = 16;
inline constexpr std::size_t kExactMaxSteps = 64;

// p_0 .. p_steps in exact rational arithmetic. Limited to n <= 16 and
// steps <= 64 so denominators stay manageable.
std::vector<std::vector<Rational>> exact_walk(const Graph& g, NodeId source, std::size_t steps,
                                              bool lazy = false);

}  // namespace lmix
