#pragma once

// Exact integer images of rational value vectors. Searches run on these so
// the inner loops avoid mpq arithmetic; int64 is used when the scaled totals
// leave enough headroom, otherwise mpz.

#include <cstdint>
#include <span>
#include <vector>

#include "fairshare/rational.hpp"

namespace fairshare::detail {

inline BigInt to_big(std::int64_t x) { return BigInt(static_cast<long>(x)); }
inline const BigInt& to_big(const BigInt& x) { return x; }

template <class Int>
Int from_big(const BigInt& x) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return x;
  } else {
    return static_cast<Int>(x.get_si());
  }
}

/// values[k] * scale for every group, scale = lcm of all denominators.
template <class Int>
struct ScaledGroups {
  std::vector<std::vector<Int>> groups;
  BigInt scale;
};

/// True if every |x| * headroom stays below 2^62.
inline bool fits_int64(const std::vector<std::vector<BigInt>>& groups, long headroom) {
  const BigInt limit = BigInt(1) << 62;
  for (const auto& g : groups) {
    BigInt total = 0;
    for (const auto& x : g) total += abs(x);
    if (total * headroom >= limit) return false;
  }
  return true;
}

/// Scales each group by the common denominator of all groups and calls
/// fn(ScaledGroups<Int>) with Int = int64_t when it fits, else BigInt.
template <class Fn>
decltype(auto) with_scaled(std::span<const std::vector<Rational>> groups, long headroom, Fn&& fn) {
  BigInt scale = 1;
  for (const auto& g : groups) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), common_denominator(g).get_mpz_t());
  std::vector<std::vector<BigInt>> big;
  big.reserve(groups.size());
  for (const auto& g : groups) big.push_back(scale_to_integers(g, scale));

  if (fits_int64(big, headroom)) {
    ScaledGroups<std::int64_t> s;
    s.scale = scale;
    for (const auto& g : big) {
      std::vector<std::int64_t> row;
      row.reserve(g.size());
      for (const auto& x : g) row.push_back(x.get_si());
      s.groups.push_back(std::move(row));
    }
    return fn(s);
  }
  ScaledGroups<BigInt> s;
  s.scale = scale;
  s.groups = std::move(big);
  return fn(s);
}

}  // namespace fairshare::detail
