#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace lmix {

// Grid values are integer multiples of 1/n^c held in 128 bits.
using Wide = unsigned __int128;

struct Fraction {
  Wide num = 0;
  Wide den = 1;
};

Wide checked_add(Wide a, Wide b);
Wide checked_mul(Wide a, Wide b);
Wide gcd(Wide a, Wide b);

// Number of bits needed to write v; bit_width(0) == 1.
unsigned bit_width(Wide v);
unsigned ceil_log2(std::uint64_t v);

// n^c. Requires c >= 6 and (c+1) * ceil(log2 n) <= 120.
Wide grid_scale(std::size_t n, unsigned c);

// Nearest integer to num/den, halves rounded up.
Wide round_half_up(Wide num, Wide den);

// nint(sigma * n^c).
Wide round_to_grid(Fraction sigma, std::size_t n, unsigned c);

std::string to_string(Wide v);
double to_double(Wide v);

}  // namespace lmix
