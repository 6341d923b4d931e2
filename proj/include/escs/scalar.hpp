#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace escs {

/// Exact rational scalar used when polygon inputs are rational.
using Rational = mpq_class;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

inline Rational to_rational(const Rational& x) { return x; }
inline Rational to_rational(double x) { return Rational(x); }  // exact binary value

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static const char* mode_name() { return "float"; }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static const char* mode_name() { return "exact"; }
};

/// Parses "p/q", a decimal string ("-0.35", "1e-3"), or a plain integer.
/// Returns nullopt if the text is not a number.
std::optional<Rational> parse_rational(const std::string& text);

/// Shortest decimal string that round-trips through double.
std::string format_double(double x);

/// "p/q" (or "p" when q == 1).
std::string format_rational(const Rational& x);

}  // namespace escs
