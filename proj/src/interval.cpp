#include "c1p/interval.hpp"

namespace c1p {

RationalInterval RationalInterval::make(std::optional<Rational> lo, bool lo_closed, std::optional<Rational> hi,
                                        bool hi_closed) {
  if (!lo) lo_closed = false;
  if (!hi) hi_closed = false;
  if (lo && hi) {
    if (*lo > *hi) return none();
    if (*lo == *hi && !(lo_closed && hi_closed)) return none();
  }
  return {false, std::move(lo), std::move(hi), lo_closed, hi_closed};
}

bool RationalInterval::contains(const Rational& x) const {
  if (empty) return false;
  if (lo && (x < *lo || (x == *lo && !lo_closed))) return false;
  if (hi && (x > *hi || (x == *hi && !hi_closed))) return false;
  return true;
}

bool RationalInterval::reaches_at_least(const Rational& k) const {
  if (empty) return false;
  if (!hi) return true;
  return *hi > k || (*hi == k && hi_closed);
}

RationalInterval RationalInterval::intersect(const RationalInterval& other) const {
  if (empty || other.empty) return none();
  std::optional<Rational> new_lo = lo;
  bool new_lo_closed = lo_closed;
  if (other.lo && (!new_lo || *other.lo > *new_lo || (*other.lo == *new_lo && !other.lo_closed))) {
    new_lo = other.lo;
    new_lo_closed = other.lo_closed;
  }
  std::optional<Rational> new_hi = hi;
  bool new_hi_closed = hi_closed;
  if (other.hi && (!new_hi || *other.hi < *new_hi || (*other.hi == *new_hi && !other.hi_closed))) {
    new_hi = other.hi;
    new_hi_closed = other.hi_closed;
  }
  return make(new_lo, new_lo_closed, new_hi, new_hi_closed);
}

std::string to_string(const RationalInterval& interval) {
  if (interval.empty) return "EMPTY";
  std::string out = interval.lo_closed ? "[" : "(";
  out += interval.lo ? to_string(*interval.lo) : "-inf";
  out += ",";
  out += interval.hi ? to_string(*interval.hi) : "inf";
  out += interval.hi_closed ? "]" : ")";
  return out;
}

}  // namespace c1p
