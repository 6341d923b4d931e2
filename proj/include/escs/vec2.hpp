#pragma once

#include "escs/scalar.hpp"

#include <cmath>

namespace escs {

template <class S>
struct Vec2 {
  S x{}, y{};

  Vec2() = default;
  Vec2(S px, S py) : x(std::move(px)), y(std::move(py)) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(const S& k) const { return {x * k, y * k}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
};

template <class S>
S dot(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.x + a.y * b.y;
}

template <class S>
S cross(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.y - a.y * b.x;
}

template <class S>
S norm2(const Vec2<S>& a) {
  return dot(a, a);
}

template <class S>
double norm(const Vec2<S>& a) {
  return std::sqrt(to_double(norm2(a)));
}

template <class S>
Vec2<double> to_f(const Vec2<S>& a) {
  return {to_double(a.x), to_double(a.y)};
}

inline Vec2<double> normalized(const Vec2<double>& a) {
  double n = norm(a);
  return {a.x / n, a.y / n};
}

/// Rotates 90 degrees counterclockwise.
template <class S>
Vec2<S> perp(const Vec2<S>& a) {
  return {-a.y, a.x};
}

/// Orientation-preserving planar isometry x' = R x + t with R = [[c,-s],[s,c]].
template <class S>
struct Iso {
  S c{1}, s{0};
  Vec2<S> t{S(0), S(0)};

  static Iso identity() { return {}; }

  Vec2<S> operator()(const Vec2<S>& p) const {
    return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y};
  }
  Vec2<S> linear(const Vec2<S>& v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }

  /// this followed by g (g ∘ this).
  Iso then(const Iso& g) const {
    Iso r;
    r.c = g.c * c - g.s * s;
    r.s = g.s * c + g.c * s;
    r.t = g(t);
    return r;
  }

  Iso inverse() const {
    Iso r;
    r.c = c;
    r.s = -s;
    r.t = {-(c * t.x + s * t.y), -(c * t.y - s * t.x)};
    return r;
  }

  bool operator==(const Iso& o) const { return c == o.c && s == o.s && t == o.t; }

  double rotation_angle() const { return std::atan2(to_double(s), to_double(c)); }
};

/// The unique orientation-preserving isometry taking segment (p,q) onto (p2,q2).
/// Requires |q-p| == |q2-p2|; the rotation part is rational whenever inputs are.
template <class S>
Iso<S> align_segment(const Vec2<S>& p, const Vec2<S>& q, const Vec2<S>& p2, const Vec2<S>& q2) {
  Vec2<S> u = q - p, v = q2 - p2;
  S n2 = norm2(u);
  Iso<S> r;
  r.c = dot(u, v) / n2;
  r.s = cross(u, v) / n2;
  r.t = p2 - r.linear(p);
  return r;
}

template <class S>
Iso<double> to_f(const Iso<S>& g) {
  return {to_double(g.c), to_double(g.s), to_f(g.t)};
}

}  // namespace escs
