#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "smoothring/error.hpp"

namespace smoothring {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses `[-]digits[.digits][e[-]digits]` or `[-]p/q` exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw Error(ErrorKind::SyntaxError, "malformed numeric literal '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  long scale = 0;
  bool any_digit = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    mantissa = mantissa * 10 + (text[i] - '0');
    any_digit = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      mantissa = mantissa * 10 + (text[i] - '0');
      --scale;
      any_digit = true;
    }
  }
  if (!any_digit) fail();
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    long exponent = 0;
    bool exp_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exponent = exponent * 10 + (text[i] - '0');
      exp_digit = true;
      if (exponent > 4000) fail();
    }
    if (!exp_digit) fail();
    scale += exp_negative ? -exponent : exponent;
  }
  if (i != text.size()) fail();
  Rational value = mantissa;
  if (scale > 0) value *= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(scale)));
  if (scale < 0) value /= Rational(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

/// Exact decimal when the denominator has only factors 2 and 5,
/// otherwise `p/q`. parse_rational(format_rational(r)) == r.
inline std::string format_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  BigInt d = den;
  unsigned twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return num.str() + "/" + den.str();
  unsigned digits = std::max(twos, fives);
  BigInt scaled = num * boost::multiprecision::pow(BigInt(10), digits) / den;
  bool negative = scaled < 0;
  std::string s = (negative ? BigInt(-scaled) : scaled).str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  return negative ? "-" + s : s;
}

}  // namespace smoothring
