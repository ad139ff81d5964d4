#pragma once

#include "c1p/numeric.hpp"

#include <optional>
#include <string>

namespace c1p {

// A convex subset of the reals with exact rational endpoints. A missing
// endpoint means the interval is unbounded on that side; unbounded sides
// are always open.
struct RationalInterval {
  bool empty = true;
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static RationalInterval none() { return {}; }
  static RationalInterval point(const Rational& x) { return {false, x, x, true, true}; }
  static RationalInterval make(std::optional<Rational> lo, bool lo_closed, std::optional<Rational> hi,
                               bool hi_closed);

  bool contains(const Rational& x) const;
  // Whether some member is >= k.
  bool reaches_at_least(const Rational& k) const;
  RationalInterval intersect(const RationalInterval& other) const;

  bool operator==(const RationalInterval&) const = default;
};

// "EMPTY", or e.g. "(0,2]" and "[0,inf)".
std::string to_string(const RationalInterval& interval);

}  // namespace c1p
