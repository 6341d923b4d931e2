#include "escs/scalar.hpp"

#include <charconv>
#include <cctype>
#include <cstdio>

namespace escs {

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    try {
      mpz_class num(text.substr(0, slash));
      mpz_class den(text.substr(slash + 1));
      if (den == 0) return std::nullopt;
      Rational r(num, den);
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  // Decimal / scientific notation, parsed exactly.
  std::string digits;
  digits.reserve(text.size());
  long exp10 = 0;
  bool seen_dot = false, seen_digit = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    if (text[i] == '-') digits.push_back('-');
    ++i;
  }
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      long e = 0;
      auto [p, ec] = std::from_chars(text.data() + i + 1, text.data() + text.size(), e);
      if (ec != std::errc() || p != text.data() + text.size()) return std::nullopt;
      exp10 += e;
      break;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) --exp10;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  mpz_class mantissa(digits.empty() || digits == "-" ? "0" : digits);
  Rational r(mantissa);
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0)
    r /= Rational(pow10);
  else
    r *= Rational(pow10);
  r.canonicalize();
  return r;
}

std::string format_double(double x) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) break;
  }
  return buf;
}

std::string format_rational(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace escs
