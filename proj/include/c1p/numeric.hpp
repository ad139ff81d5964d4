#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace c1p {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parses "p" or "p/q" (optional leading '-'). Returns nullopt on malformed
// input or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

// Exact rendering: integers as "p", everything else as "p/q" in lowest terms.
std::string to_string(const Rational& value);

inline bool is_integer(const Rational& value) {
  return boost::multiprecision::denominator(value) == 1;
}

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

}  // namespace c1p
