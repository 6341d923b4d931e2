#include "escs/polygon.hpp"

#include <cmath>
#include <numbers>

namespace escs {

namespace {

constexpr double kTauLen = 1e-9;

template <class S>
bool edge_degenerate(const Vec2<S>& a, const Vec2<S>& b) {
  if constexpr (ScalarTraits<S>::exact)
    return a == b;
  else
    return norm(b - a) < kTauLen;
}

// Interior angle of the region lying to the LEFT of the traversal p -> v -> n.
template <class S>
double left_angle(const Vec2<S>& p, const Vec2<S>& v, const Vec2<S>& n) {
  Vec2<double> d1 = to_f(v - p), d2 = to_f(n - v);
  double turn = std::atan2(cross(d1, d2), dot(d1, d2));
  return std::numbers::pi - turn;
}

template <class S>
void check_chain_simple(const std::vector<Vec2<S>>& chain, bool closed, const char* what,
                        ValidationReport& rep) {
  std::size_t n = chain.size();
  std::size_t m = closed ? n : n - 1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool adjacent = (j == i + 1) || (closed && i == 0 && j == m - 1);
      const auto &a = chain[i], &b = chain[(i + 1) % n];
      const auto &c = chain[j], &d = chain[(j + 1) % n];
      if (adjacent) {
        // Consecutive edges may only share the common endpoint.
        if (segments_cross(a, b, c, d))
          rep.issues.push_back({PolygonError::SelfIntersection,
                                std::string(what) + ": consecutive edges overlap"});
        continue;
      }
      if (segments_cross(a, b, c, d) || a == c || a == d || b == c || b == d)
        rep.issues.push_back(
            {PolygonError::SelfIntersection, std::string(what) + ": edges intersect"});
    }
  }
}

template <class S>
void check_chains_disjoint(const std::vector<Vec2<S>>& u, bool u_closed,
                           const std::vector<Vec2<S>>& v, bool v_closed, const char* what,
                           ValidationReport& rep) {
  std::size_t mu = u_closed ? u.size() : u.size() - 1;
  std::size_t mv = v_closed ? v.size() : v.size() - 1;
  for (std::size_t i = 0; i < mu; ++i)
    for (std::size_t j = 0; j < mv; ++j) {
      const auto &a = u[i], &b = u[(i + 1) % u.size()];
      const auto &c = v[j], &d = v[(j + 1) % v.size()];
      if (segments_cross(a, b, c, d) || a == c || a == d || b == c || b == d) {
        rep.issues.push_back({PolygonError::SelfIntersection, std::string(what)});
        return;
      }
    }
}

}  // namespace

const char* to_string(PolygonError e) {
  switch (e) {
    case PolygonError::SelfIntersection: return "SelfIntersection";
    case PolygonError::BadOrientation: return "BadOrientation";
    case PolygonError::DegenerateEdge: return "DegenerateEdge";
    case PolygonError::NotContained: return "NotContained";
  }
  return "?";
}

template <class S>
ValidationReport validate_polygon(const Polygon<S>& p) {
  ValidationReport rep;
  if (p.outer.size() < 3) {
    rep.issues.push_back({PolygonError::DegenerateEdge, "outer boundary needs >= 3 vertices"});
    return rep;
  }
  auto check_degenerate = [&](const std::vector<Vec2<S>>& chain, bool closed, const char* what) {
    std::size_t m = closed ? chain.size() : chain.size() - 1;
    for (std::size_t i = 0; i < m; ++i)
      if (edge_degenerate(chain[i], chain[(i + 1) % chain.size()]))
        rep.issues.push_back({PolygonError::DegenerateEdge, std::string(what)});
  };
  check_degenerate(p.outer, true, "outer: zero-length edge");
  for (const auto& h : p.holes) check_degenerate(h, true, "hole: zero-length edge");
  for (const auto& s : p.slits) {
    if (s.size() < 2)
      rep.issues.push_back({PolygonError::DegenerateEdge, "slit needs >= 2 vertices"});
    else
      check_degenerate(s, false, "slit: zero-length edge");
  }
  if (!rep.issues.empty()) return rep;

  check_chain_simple(p.outer, true, "outer", rep);
  for (const auto& h : p.holes) check_chain_simple(h, true, "hole", rep);
  for (const auto& s : p.slits) check_chain_simple(s, false, "slit", rep);
  rep.simple = rep.issues.empty();

  if (sign(polygon_signed_area2(p.outer)) <= 0)
    rep.issues.push_back({PolygonError::BadOrientation, "outer boundary must be counterclockwise"});
  for (const auto& h : p.holes)
    if (sign(polygon_signed_area2(h)) >= 0)
      rep.issues.push_back({PolygonError::BadOrientation, "holes must be clockwise"});
  rep.oriented =
      std::none_of(rep.issues.begin(), rep.issues.end(),
                   [](const ValidationIssue& i) { return i.code == PolygonError::BadOrientation; });

  // Pairwise disjointness and containment.
  for (std::size_t i = 0; i < p.holes.size(); ++i) {
    check_chains_disjoint(p.holes[i], true, p.outer, true, "hole touches outer boundary", rep);
    for (std::size_t j = i + 1; j < p.holes.size(); ++j)
      check_chains_disjoint(p.holes[i], true, p.holes[j], true, "holes touch", rep);
    for (const auto& v : p.holes[i])
      if (!point_in_chain(v, p.outer)) {
        rep.issues.push_back({PolygonError::NotContained, "hole not strictly inside outer"});
        break;
      }
  }
  for (std::size_t i = 0; i < p.slits.size(); ++i) {
    check_chains_disjoint(p.slits[i], false, p.outer, true, "slit touches outer boundary", rep);
    for (const auto& h : p.holes)
      check_chains_disjoint(p.slits[i], false, h, true, "slit touches hole", rep);
    for (std::size_t j = i + 1; j < p.slits.size(); ++j)
      check_chains_disjoint(p.slits[i], false, p.slits[j], false, "slits touch", rep);
    for (const auto& v : p.slits[i]) {
      Polygon<S> domain{p.outer, p.holes, {}};
      if (!point_in_polygon(v, domain)) {
        rep.issues.push_back({PolygonError::NotContained, "slit not strictly interior"});
        break;
      }
    }
  }
  if (!rep.issues.empty()) return rep;

  // Angle report. Domain lies left of outer (CCW) and left of holes (CW).
  auto chain_angles = [&](const std::vector<Vec2<S>>& chain, int id) {
    std::size_t n = chain.size();
    for (std::size_t i = 0; i < n; ++i)
      rep.angles.push_back(
          {id, static_cast<int>(i), left_angle(chain[(i + n - 1) % n], chain[i], chain[(i + 1) % n])});
  };
  chain_angles(p.outer, -1);
  for (std::size_t h = 0; h < p.holes.size(); ++h) chain_angles(p.holes[h], static_cast<int>(h));
  for (std::size_t s = 0; s < p.slits.size(); ++s) {
    const auto& chain = p.slits[s];
    int id = ~static_cast<int>(s);
    rep.angles.push_back({id, 0, 2 * std::numbers::pi});
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      // Interior slit breakpoint: the two sides have angles pi -/+ turn.
      double a = left_angle(chain[i - 1], chain[i], chain[i + 1]);
      rep.angles.push_back({id, static_cast<int>(i), a});
      rep.angles.push_back({id, static_cast<int>(i), 2 * std::numbers::pi - a});
    }
    rep.angles.push_back({id, static_cast<int>(chain.size()) - 1, 2 * std::numbers::pi});
  }

  rep.valid = true;
  return rep;
}

template ValidationReport validate_polygon(const Polygon<double>&);
template ValidationReport validate_polygon(const Polygon<Rational>&);

}  // namespace escs
