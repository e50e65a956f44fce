#include "dynmatch/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dynmatch {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) return std::nullopt;
    BigInt p(num), q(den);
    if (q == 0) return std::nullopt;
    return Rational(p, q);
  }

  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '+' || whole[0] == '-')) whole = whole.substr(1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    for (char c : whole)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt digits = whole.empty() ? BigInt(0) : BigInt(whole);
    digits *= scale;
    if (!frac.empty()) digits += BigInt(frac);
    Rational r(digits, scale);
    if (negative) r = -r;
    return r;
  }

  if (!is_integer_token(text)) return std::nullopt;
  return Rational(BigInt(text));
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

std::string rational_to_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5Lg", to_long_double(r));
  return buf;
}

}  // namespace dynmatch
