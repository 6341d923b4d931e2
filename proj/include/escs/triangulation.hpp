#pragma once

#include "escs/polygon.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace escs {

struct BoundaryClass {
  enum Kind { Outer, Hole, SlitLeft, SlitRight };
  Kind kind;
  int chain;  // hole или slit index; 0 for outer
};

/// Triangulation of a polygonal domain. Slit sides are already separated:
/// interior slit vertices are duplicated and slit edges carry distinct
/// left/right boundary classes.
template <class S>
struct Triangulation {
  std::vector<Vec2<S>> points;
  struct Face {
    std::array<int, 3> v;  // counterclockwise
  };
  std::vector<Face> faces;
  // Boundary class id per face edge (edge i runs v[i] -> v[i+1]); -1 interior.
  std::vector<std::array<int, 3>> edge_class;
  std::vector<BoundaryClass> classes;

  bool is_boundary_vertex(int v) const {
    for (std::size_t f = 0; f < faces.size(); ++f)
      for (int e = 0; e < 3; ++e)
        if (edge_class[f][e] >= 0 && (faces[f].v[e] == v || faces[f].v[(e + 1) % 3] == v))
          return true;
    return false;
  }
};

struct MeshQuality {
  double min_angle_deg = 0;
  double max_edge = 0;
  int steiner_points = 0;
};

struct RefineOptions {
  double target_edge = 0;        // 0 = no size bound
  double min_angle_deg = 20.0;   // 0 = no quality bound
  int max_insertions = 400000;
};

class TriangulationError : public std::runtime_error {
 public:
  explicit TriangulationError(const std::string& m) : std::runtime_error(m) {}
};

/// Constrained Delaunay triangulation of the polygon's vertices only
/// (no Steiner points). Used to build surfaces by doubling.
template <class S>
Triangulation<S> triangulate_polygon(const Polygon<S>& poly);

/// Quality mesh: constrained Delaunay + refinement to the given options.
Triangulation<double> refine_polygon(const Polygon<double>& poly, const RefineOptions& opt,
                                     MeshQuality* quality = nullptr);

extern template Triangulation<double> triangulate_polygon(const Polygon<double>&);
extern template Triangulation<Rational> triangulate_polygon(const Polygon<Rational>&);

}  // namespace escs
