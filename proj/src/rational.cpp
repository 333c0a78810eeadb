#include "tridecomp/rational.hpp"

#include <limits>
#include <stdexcept>

namespace tridecomp {

BigInt floor_rat(const Rat& q) {
  BigInt num = numerator(q), den = denominator(q);
  BigInt d = num / den;
  if (num < 0 && d * den != num) --d;
  return d;
}

BigInt ceil_rat(const Rat& q) {
  BigInt num = numerator(q), den = denominator(q);
  BigInt d = num / den;
  if (num > 0 && d * den != num) ++d;
  return d;
}

std::string rat_to_string(const Rat& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

namespace {

// cpp_int's string constructor treats a leading 0 as octal; parse digit
// strings explicitly in base 10
BigInt parse_int10(std::string s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("bad integer literal '" + s + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt p = parse_int10(text.substr(0, slash));
    BigInt q = parse_int10(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rat(p, q);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rat(parse_int10(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  if (frac_len == 0 || digits == "+" || digits == "-" || digits.empty())
    throw std::invalid_argument("bad decimal literal '" + text + "'");
  BigInt den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return Rat(parse_int10(digits), den);
}

double to_double(const Rat& q) { return q.convert_to<double>(); }

std::int64_t checked_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("value does not fit in 64 bits: " + v.str());
  return v.convert_to<std::int64_t>();
}

}  // namespace tridecomp
