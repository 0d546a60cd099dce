#pragma once

// Exact rational values. Every item value, bundle value, share value and
// threshold in the library is a Rational; nothing goes through floating point.

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairshare {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p", "p/q", or a finite decimal such as "0.4615" into an exact,
/// canonical Rational. Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

Rational sum(std::span<const Rational> values);

/// Least common multiple of the denominators.
BigInt common_denominator(std::span<const Rational> values);

/// Multiplies every value by `scale` and returns the (exact) integer results.
/// Throws std::logic_error if some product is not integral.
std::vector<BigInt> scale_to_integers(std::span<const Rational> values, const BigInt& scale);

/// Rational from an integer-scaled quantity.
inline Rational unscale(const BigInt& value, const BigInt& scale) {
  Rational r(value, scale);
  r.canonicalize();
  return r;
}

/// ceil(r) for r >= 0.
BigInt ceil(const Rational& r);

}  // namespace fairshare
