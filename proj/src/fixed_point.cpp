#include "lmix/fixed_point.hpp"

#include <algorithm>
#include <bit>

#include "lmix/error.hpp"

namespace lmix {

namespace {
constexpr Wide kWideMax = ~Wide{0};
constexpr unsigned kCapacityBits = 120;
}  // namespace

Wide checked_add(Wide a, Wide b) {
  if (a > kWideMax - b) throw Error(ErrorCode::Overflow, "128-bit addition overflow");
  return a + b;
}

Wide checked_mul(Wide a, Wide b) {
  if (a != 0 && b > kWideMax / a) throw Error(ErrorCode::Overflow, "128-bit multiplication overflow");
  return a * b;
}

Wide gcd(Wide a, Wide b) {
  while (b != 0) {
    const Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

unsigned bit_width(Wide v) {
  const auto high = static_cast<std::uint64_t>(v >> 64);
  const auto low = static_cast<std::uint64_t>(v);
  if (high != 0) return 128 - static_cast<unsigned>(std::countl_zero(high));
  if (low != 0) return 64 - static_cast<unsigned>(std::countl_zero(low));
  return 1;
}

unsigned ceil_log2(std::uint64_t v) {
  unsigned bits = 0;
  while ((std::uint64_t{1} << bits) < v) ++bits;
  return bits;
}

Wide grid_scale(std::size_t n, unsigned c) {
  if (c < 6) throw Error(ErrorCode::InfeasibleParams, "grid exponent c must be >= 6");
  if (n < 2) throw Error(ErrorCode::InfeasibleParams, "grid needs n >= 2");
  if (static_cast<std::uint64_t>(c + 1) * ceil_log2(n) > kCapacityBits) {
    throw Error(ErrorCode::Overflow, "n^c does not fit the 128-bit capacity with headroom");
  }
  Wide scale = 1;
  for (unsigned i = 0; i < c; ++i) scale = checked_mul(scale, n);
  return scale;
}

Wide round_half_up(Wide num, Wide den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  if (den > (kWideMax >> 1)) throw Error(ErrorCode::Overflow, "denominator too large");
  const Wide q = num / den;
  const Wide r = num % den;
  return (2 * r >= den) ? checked_add(q, 1) : q;
}

Wide round_to_grid(Fraction sigma, std::size_t n, unsigned c) {
  const Wide scale = grid_scale(n, c);
  const Wide q = sigma.num / sigma.den;
  const Wide r = sigma.num % sigma.den;
  return checked_add(checked_mul(q, scale), round_half_up(checked_mul(r, scale), sigma.den));
}

std::string to_string(Wide v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

double to_double(Wide v) { return static_cast<double>(v); }

}  // namespace lmix
