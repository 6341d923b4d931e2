#pragma once

#include "escs/predicates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace escs {

/// Planar polygonal domain: counterclockwise outer boundary, clockwise holes,
/// and open interior polylines (slits, both sides of which become boundary).
template <class S>
struct Polygon {
  std::vector<Vec2<S>> outer;
  std::vector<std::vector<Vec2<S>>> holes;
  std::vector<std::vector<Vec2<S>>> slits;
};

enum class PolygonError { SelfIntersection, BadOrientation, DegenerateEdge, NotContained };

struct ValidationIssue {
  PolygonError code;
  std::string message;
};

struct VertexAngle {
  int chain;   // -1 outer, 0.. hole index, ~k for slit k (see slit_side)
  int index;   // vertex index within the chain
  double angle;  // interior angle of the domain at this vertex (radians)
};

struct ValidationReport {
  bool valid = false;
  bool simple = false;
  bool oriented = false;
  std::vector<ValidationIssue> issues;
  std::vector<VertexAngle> angles;
};

const char* to_string(PolygonError e);

template <class S>
S polygon_signed_area2(const std::vector<Vec2<S>>& chain) {
  S a(0);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& p = chain[i];
    const auto& q = chain[(i + 1) % chain.size()];
    a += cross(p, q);
  }
  return a;
}

template <class S>
double polygon_area(const Polygon<S>& p) {
  double a = to_double(polygon_signed_area2(p.outer)) / 2.0;
  for (const auto& h : p.holes) a += to_double(polygon_signed_area2(h)) / 2.0;  // holes are CW
  return a;
}

/// Strictly-inside test by exact ray crossing parity; returns false on the boundary.
template <class S>
bool point_in_chain(const Vec2<S>& p, const std::vector<Vec2<S>>& chain) {
  bool in = false;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& a = chain[i];
    const auto& b = chain[(i + 1) % chain.size()];
    if ((a.y > p.y) != (b.y > p.y)) {
      int o = orient2d(a, b, p);
      if (o == 0) return false;  // on boundary
      if ((b.y > a.y) == (o > 0)) in = !in;
    } else if (a.y == p.y && b.y == p.y) {
      if (sign(dot(a - p, b - p)) <= 0) return false;  // on horizontal edge
    }
  }
  return in;
}

/// Inside the domain: inside outer, outside every hole. Boundary counts as outside.
template <class S>
bool point_in_polygon(const Vec2<S>& p, const Polygon<S>& poly) {
  if (!point_in_chain(p, poly.outer)) return false;
  for (const auto& h : poly.holes)
    if (point_in_chain(p, h)) return false;
  return true;
}

template <class S>
ValidationReport validate_polygon(const Polygon<S>& p);

extern template ValidationReport validate_polygon(const Polygon<double>&);
extern template ValidationReport validate_polygon(const Polygon<Rational>&);

}  // namespace escs
