#include "c1p/numeric.hpp"

#include <cctype>

namespace c1p {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  BigInt p{std::string(num)};
  BigInt q{std::string(den)};
  if (q == 0) return std::nullopt;
  Rational r(p, q);
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& value) {
  BigInt p = boost::multiprecision::numerator(value);
  BigInt q = boost::multiprecision::denominator(value);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

BigInt floor_of(const Rational& value) {
  BigInt p = boost::multiprecision::numerator(value);
  BigInt q = boost::multiprecision::denominator(value);
  BigInt quotient = p / q;  // truncates toward zero
  if (p < 0 && quotient * q != p) quotient -= 1;
  return quotient;
}

BigInt ceil_of(const Rational& value) {
  BigInt f = floor_of(value);
  if (Rational(f) == value) return f;
  return f + 1;
}

}  // namespace c1p
