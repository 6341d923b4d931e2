#pragma once

#include "escs/vec2.hpp"

namespace escs {

// Geometric predicates. The double versions evaluate a floating-point filter
// first and fall back to exact rational evaluation when the result is within
// the rounding-error bound; the Rational versions are exact throughout.

inline int sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
inline int sign(const Rational& v) { return sgn(v); }

/// Sign of cross(b-a, c-a): +1 if a,b,c counterclockwise.
int orient2d(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c);

inline int orient2d(const Vec2<Rational>& a, const Vec2<Rational>& b, const Vec2<Rational>& c) {
  return sign(cross(b - a, c - a));
}

/// +1 if d lies strictly inside the circumcircle of counterclockwise (a,b,c).
int incircle(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c,
             const Vec2<double>& d);

int incircle(const Vec2<Rational>& a, const Vec2<Rational>& b, const Vec2<Rational>& c,
             const Vec2<Rational>& d);

/// True if the open segments (a,b) and (c,d) intersect, or an endpoint of one
/// lies in the interior of the other (shared endpoints do not count).
template <class S>
bool segments_cross(const Vec2<S>& a, const Vec2<S>& b, const Vec2<S>& c, const Vec2<S>& d) {
  int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_open = [](const Vec2<S>& p, const Vec2<S>& q, const Vec2<S>& r) {
    // r strictly inside segment (p,q), assuming collinear.
    return sign(dot(p - r, q - r)) < 0;
  };
  if (o1 == 0 && on_open(a, b, c)) return true;
  if (o2 == 0 && on_open(a, b, d)) return true;
  if (o3 == 0 && on_open(c, d, a)) return true;
  if (o4 == 0 && on_open(c, d, b)) return true;
  return false;
}

}  // namespace escs
