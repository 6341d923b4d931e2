#include "escs/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <set>

namespace escs {

namespace {

inline std::uint64_t ekey(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

inline std::uint64_t dkey(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

// Incremental constrained Delaunay triangulation. Points live inside a far
// super-triangle (1e7 x the input extent), which keeps every real circumcircle
// clear of the super vertices, so no symbolic handling is needed; insertions
// split a face or edge and restore Delaunay by flips that never cross
// constrained edges.
template <class S>
class Cdt {
 public:
  struct Tri {
    std::array<int, 3> v;  // CCW; edge i runs v[i] -> v[(i+1)%3]
    std::array<int, 3> n;  // neighbor across edge i, -1 none
    bool alive = true;
    bool inside = false;
  };

  std::vector<Vec2<S>> pts;
  std::vector<Tri> tris;
  std::unordered_map<std::uint64_t, int> constraint;  // undirected edge -> chain id
  std::vector<int> v2t;
  std::vector<int> dirty;  // faces touched since last drain (refinement queue feed)
  int insertions = 0;

  explicit Cdt(const std::vector<Vec2<S>>& input) {
    double lo_x = 0, lo_y = 0, hi_x = 1, hi_y = 1;
    if (!input.empty()) {
      lo_x = hi_x = to_double(input[0].x);
      lo_y = hi_y = to_double(input[0].y);
      for (const auto& p : input) {
        lo_x = std::min(lo_x, to_double(p.x));
        hi_x = std::max(hi_x, to_double(p.x));
        lo_y = std::min(lo_y, to_double(p.y));
        hi_y = std::max(hi_y, to_double(p.y));
      }
    }
    double cx = (lo_x + hi_x) / 2, cy = (lo_y + hi_y) / 2;
    double d = std::max({hi_x - lo_x, hi_y - lo_y, 1.0}) * 1e7;
    pts.push_back({S(cx - 2 * d), S(cy - d)});
    pts.push_back({S(cx + 2 * d), S(cy - d)});
    pts.push_back({S(cx), S(cy + 2 * d)});
    tris.push_back({{0, 1, 2}, {-1, -1, -1}});
    v2t = {0, 0, 0};
  }

  bool is_super(int v) const { return v < 3; }

  int opposite_edge(int t, int nb) const {
    for (int e = 0; e < 3; ++e)
      if (tris[t].n[e] == nb) return e;
    throw TriangulationError("broken adjacency");
  }

  int corner_of_or(int t, int v) const {
    for (int i = 0; i < 3; ++i)
      if (tris[t].v[i] == v) return i;
    return -1;
  }

  int corner_of(int t, int v) const {
    int c = corner_of_or(t, v);
    if (c < 0) throw TriangulationError("vertex not in triangle");
    return c;
  }

  // Rotation around v: crossing edge (v, next) moves clockwise, crossing
  // (prev, v) moves counterclockwise.
  int rotate_cw(int t, int v) const { return tris[t].n[corner_of(t, v)]; }
  int rotate_ccw(int t, int v) const { return tris[t].n[(corner_of(t, v) + 2) % 3]; }

  struct Location {
    int tri;
    int edge;    // >=0 on that edge, -1 strictly inside, -2 existing vertex
    int vertex;  // set when edge == -2
  };

  Location locate(const Vec2<S>& p, int hint) const {
    int t = (hint >= 0 && hint < static_cast<int>(tris.size()) && tris[t_clamp(hint)].alive)
                ? hint
                : last_alive();
    int steps = 0, limit = static_cast<int>(tris.size()) + 64;
    while (true) {
      if (++steps > limit || t < 0 || !tris[t].alive) return locate_linear(p);
      int zero_edge = -1;
      bool moved = false;
      for (int e = 0; e < 3; ++e) {
        int o = orient2d(pts[tris[t].v[e]], pts[tris[t].v[(e + 1) % 3]], p);
        if (o < 0) {
          t = tris[t].n[e];
          moved = true;
          break;
        }
        if (o == 0) zero_edge = (zero_edge == -1) ? e : -3;
      }
      if (moved) continue;
      for (int i = 0; i < 3; ++i)
        if (pts[tris[t].v[i]] == p) return {t, -2, tris[t].v[i]};
      if (zero_edge == -3) throw TriangulationError("degenerate face in locate");
      return {t, zero_edge, -1};
    }
  }

  int t_clamp(int t) const { return std::min(std::max(t, 0), static_cast<int>(tris.size()) - 1); }

  int last_alive() const {
    for (int t = static_cast<int>(tris.size()) - 1; t >= 0; --t)
      if (tris[t].alive) return t;
    throw TriangulationError("empty triangulation");
  }

  Location locate_linear(const Vec2<S>& p) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      int zero_edge = -1;
      bool out = false;
      for (int e = 0; e < 3; ++e) {
        int o = orient2d(pts[tris[t].v[e]], pts[tris[t].v[(e + 1) % 3]], p);
        if (o < 0) {
          out = true;
          break;
        }
        if (o == 0) zero_edge = e;
      }
      if (out) continue;
      for (int i = 0; i < 3; ++i)
        if (pts[tris[t].v[i]] == p) return {t, -2, tris[t].v[i]};
      if (zero_edge == -1 || orient2d(pts[tris[t].v[(zero_edge + 1) % 3]],
                                      pts[tris[t].v[(zero_edge + 2) % 3]], p) != 0)
        return {t, zero_edge, -1};
    }
    throw TriangulationError("point outside triangulation");
  }

  int new_tri(int a, int b, int c, bool inside) {
    tris.push_back({{a, b, c}, {-1, -1, -1}, true, inside});
    int id = static_cast<int>(tris.size()) - 1;
    v2t.resize(pts.size(), -1);
    v2t[a] = v2t[b] = v2t[c] = id;
    dirty.push_back(id);
    return id;
  }

  bool constrained(int u, int v) const { return constraint.count(ekey(u, v)) > 0; }

  void relink_external(int nb, int old_t, int new_t) {
    if (nb < 0) return;
    for (int e = 0; e < 3; ++e)
      if (tris[nb].n[e] == old_t) {
        tris[nb].n[e] = new_t;
        return;
      }
  }

  // Flip the diagonal (a,b) shared by t (apex p) and nb (apex d).
  // Afterwards t = (p, a, d) and nb = (d, b, p).
  void flip_edge(int t, int e) {
    int nb = tris[t].n[e];
    int e2 = opposite_edge(nb, t);
    int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
    int p = tris[t].v[(e + 2) % 3], d = tris[nb].v[(e2 + 2) % 3];
    int t_pa = tris[t].n[(e + 2) % 3];
    int t_bp = tris[t].n[(e + 1) % 3];
    int n_ad = tris[nb].n[(e2 + 1) % 3];
    int n_db = tris[nb].n[(e2 + 2) % 3];
    tris[t].v = {p, a, d};
    tris[t].n = {t_pa, n_ad, nb};
    tris[nb].v = {d, b, p};
    tris[nb].n = {n_db, t_bp, t};
    relink_external(n_ad, nb, t);
    relink_external(t_bp, t, nb);
    for (int i : {0, 1, 2}) {
      v2t[tris[t].v[i]] = t;
      v2t[tris[nb].v[i]] = nb;
    }
    dirty.push_back(t);
    dirty.push_back(nb);
  }

  // Edge e of t faces the newly inserted vertex; restore Delaunay locally.
  void legalize(int t, int e) {
    int nb = tris[t].n[e];
    if (nb < 0) return;
    int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
    if (constrained(a, b)) return;
    int e2 = opposite_edge(nb, t);
    int d = tris[nb].v[(e2 + 2) % 3];
    if (incircle(pts[tris[t].v[0]], pts[tris[t].v[1]], pts[tris[t].v[2]], pts[d]) <= 0) return;
    flip_edge(t, e);
    // t = (p, a, d), nb = (d, b, p); the edges facing p are t:1 and nb:0.
    legalize(t, 1);
    legalize(nb, 0);
  }

  int insert(const Vec2<S>& p, int hint) {
    ++insertions;
    Location loc = locate(p, hint);
    if (loc.edge == -2) return loc.vertex;
    pts.push_back(p);
    int vp = static_cast<int>(pts.size()) - 1;
    v2t.resize(pts.size(), -1);
    if (loc.edge == -1)
      split_face(loc.tri, vp);
    else
      split_edge(loc.tri, loc.edge, vp);
    return vp;
  }

  void split_face(int t, int vp) {
    auto v = tris[t].v;
    auto n = tris[t].n;
    bool inside = tris[t].inside;
    tris[t].alive = false;
    int t0 = new_tri(v[0], v[1], vp, inside);
    int t1 = new_tri(v[1], v[2], vp, inside);
    int t2 = new_tri(v[2], v[0], vp, inside);
    tris[t0].n = {n[0], t1, t2};
    tris[t1].n = {n[1], t2, t0};
    tris[t2].n = {n[2], t0, t1};
    relink_external(n[0], t, t0);
    relink_external(n[1], t, t1);
    relink_external(n[2], t, t2);
    legalize(t0, 0);
    legalize(t1, 0);
    legalize(t2, 0);
  }

  void split_edge(int t, int e, int vp) {
    int nb = tris[t].n[e];
    int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
    auto it = constraint.find(ekey(a, b));
    if (it != constraint.end()) {
      int chain = it->second;
      constraint.erase(it);
      constraint[ekey(a, vp)] = chain;
      constraint[ekey(vp, b)] = chain;
    }
    int p = tris[t].v[(e + 2) % 3];
    auto tn = tris[t].n;
    bool inside_t = tris[t].inside;
    tris[t].alive = false;
    int t1 = new_tri(a, vp, p, inside_t);
    int t2 = new_tri(vp, b, p, inside_t);
    tris[t1].n = {-1, t2, tn[(e + 2) % 3]};
    tris[t2].n = {-1, tn[(e + 1) % 3], t1};
    relink_external(tn[(e + 2) % 3], t, t1);
    relink_external(tn[(e + 1) % 3], t, t2);
    if (nb >= 0) {
      int e2 = opposite_edge(nb, t);
      int d = tris[nb].v[(e2 + 2) % 3];
      auto nn = tris[nb].n;
      bool inside_n = tris[nb].inside;
      tris[nb].alive = false;
      int t3 = new_tri(b, vp, d, inside_n);
      int t4 = new_tri(vp, a, d, inside_n);
      tris[t3].n = {t2, t4, nn[(e2 + 2) % 3]};
      tris[t4].n = {t1, nn[(e2 + 1) % 3], t3};
      tris[t2].n[0] = t3;
      tris[t1].n[0] = t4;
      relink_external(nn[(e2 + 2) % 3], nb, t3);
      relink_external(nn[(e2 + 1) % 3], nb, t4);
      legalize(t1, 2);
      legalize(t2, 1);
      legalize(t3, 2);
      legalize(t4, 1);
    } else {
      legalize(t1, 2);
      legalize(t2, 1);
    }
  }

  // --- constraint insertion --------------------------------------------------

  std::pair<int, int> find_directed(int a, int b) const {
    int start = v2t[a];
    if (start < 0 || !tris[start].alive) return find_directed_linear(a, b);
    int t = start, guard = 0;
    do {
      if (++guard > 1000) return find_directed_linear(a, b);
      int i = corner_of_or(t, a);
      if (i < 0) return find_directed_linear(a, b);
      if (tris[t].v[(i + 1) % 3] == b) return {t, i};
      t = rotate_ccw(t, a);
    } while (t >= 0 && t != start);
    return {-1, -1};
  }

  std::pair<int, int> find_directed_linear(int a, int b) const {
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      for (int e = 0; e < 3; ++e)
        if (tris[t].v[e] == a && tris[t].v[(e + 1) % 3] == b) return {t, e};
    }
    return {-1, -1};
  }

  void insert_constraint(int a, int b, int chain) {
    if (a == b) return;
    if (find_directed(a, b).first >= 0) {
      constraint[ekey(a, b)] = chain;
      return;
    }
    // Find the wedge triangle at a containing direction b-a.
    int t = v2t[a];
    int start = t, guard = 0;
    while (true) {
      if (++guard > static_cast<int>(tris.size()) + 8)
        throw TriangulationError("constraint start not found");
      int i = corner_of(t, a);
      int u = tris[t].v[(i + 1) % 3], w = tris[t].v[(i + 2) % 3];
      int o1 = orient2d(pts[a], pts[u], pts[b]);
      int o2 = orient2d(pts[a], pts[w], pts[b]);
      if (o1 == 0 && sign(dot(pts[u] - pts[a], pts[b] - pts[a])) > 0) {
        insert_constraint(a, u, chain);
        insert_constraint(u, b, chain);
        return;
      }
      if (o2 == 0 && sign(dot(pts[w] - pts[a], pts[b] - pts[a])) > 0) {
        insert_constraint(a, w, chain);
        insert_constraint(w, b, chain);
        return;
      }
      if (o1 > 0 && o2 < 0) break;
      t = rotate_ccw(t, a);
      if (t < 0 || t == start) throw TriangulationError("constraint start not found");
    }
    // Walk the pipe of faces crossed by the open segment (a,b).
    std::vector<int> pipe{t};
    std::vector<int> upper, lower;
    int prev = -1;
    while (corner_of_or(t, b) < 0) {
      int exit_edge = -1;
      for (int e = 0; e < 3; ++e) {
        int u = tris[t].v[e], v = tris[t].v[(e + 1) % 3];
        if (tris[t].n[e] == prev && prev >= 0) continue;
        if (u == a || v == a) continue;
        int ou = orient2d(pts[a], pts[b], pts[u]);
        int ov = orient2d(pts[a], pts[b], pts[v]);
        if (ou == 0 && u != b && sign(dot(pts[a] - pts[u], pts[b] - pts[u])) < 0) {
          insert_constraint(a, u, chain);
          insert_constraint(u, b, chain);
          return;
        }
        if (ov == 0 && v != b && sign(dot(pts[a] - pts[v], pts[b] - pts[v])) < 0) {
          insert_constraint(a, v, chain);
          insert_constraint(v, b, chain);
          return;
        }
        if (ou > 0 && ov < 0) {
          exit_edge = e;
          break;
        }
      }
      if (exit_edge < 0) throw TriangulationError("pipe walk stuck");
      int u = tris[t].v[exit_edge], v = tris[t].v[(exit_edge + 1) % 3];
      if (constrained(u, v)) throw TriangulationError("constraints intersect");
      if (orient2d(pts[a], pts[b], pts[u]) > 0)
        push_unique(upper, u);
      else
        push_unique(lower, u);
      if (orient2d(pts[a], pts[b], pts[v]) > 0)
        push_unique(upper, v);
      else
        push_unique(lower, v);
      prev = t;
      t = tris[t].n[exit_edge];
      if (t < 0) throw TriangulationError("pipe left the triangulation");
      pipe.push_back(t);
    }
    bool inside = tris[pipe[0]].inside;
    std::unordered_map<std::uint64_t, int> outer_nb;
    for (int pt : pipe) {
      for (int e = 0; e < 3; ++e) {
        int nb = tris[pt].n[e];
        if (nb >= 0 && std::find(pipe.begin(), pipe.end(), nb) != pipe.end()) continue;
        outer_nb[dkey(tris[pt].v[e], tris[pt].v[(e + 1) % 3])] = nb;
      }
      tris[pt].alive = false;
    }
    std::vector<int> created;
    std::vector<int> chain_up{a};
    chain_up.insert(chain_up.end(), upper.begin(), upper.end());
    chain_up.push_back(b);
    std::vector<int> chain_lo{b};
    chain_lo.insert(chain_lo.end(), lower.rbegin(), lower.rend());
    chain_lo.push_back(a);
    triangulate_fan(chain_up, created, inside);
    triangulate_fan(chain_lo, created, inside);
    // Stitch created triangles to each other and back to the outside.
    std::unordered_map<std::uint64_t, std::pair<int, int>> open;
    for (int ct : created)
      for (int e = 0; e < 3; ++e) open[dkey(tris[ct].v[e], tris[ct].v[(e + 1) % 3])] = {ct, e};
    for (auto& [key, te] : open) {
      int u = static_cast<int>(key >> 32), v = static_cast<int>(key & 0xffffffffu);
      auto rev = open.find(dkey(v, u));
      if (rev != open.end()) {
        tris[te.first].n[te.second] = rev->second.first;
        continue;
      }
      auto ext = outer_nb.find(key);
      int nb = (ext == outer_nb.end()) ? -1 : ext->second;
      tris[te.first].n[te.second] = nb;
      if (nb >= 0) {
        for (int e = 0; e < 3; ++e)
          if (tris[nb].v[e] == v && tris[nb].v[(e + 1) % 3] == u) tris[nb].n[e] = te.first;
      }
    }
    constraint[ekey(a, b)] = chain;
  }

  static void push_unique(std::vector<int>& v, int x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }

  // Triangulates the pseudo-polygon bounded by the chain (front..back) and the
  // base edge (front, back); interior lies left of front->back.
  void triangulate_fan(const std::vector<int>& chain, std::vector<int>& created, bool inside) {
    if (chain.size() < 3) return;
    int F = chain.front(), B = chain.back();
    std::size_t ci = 0;
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
      if (orient2d(pts[F], pts[B], pts[chain[i]]) <= 0) continue;
      if (ci == 0) {
        ci = i;
        continue;
      }
      if (incircle(pts[F], pts[B], pts[chain[ci]], pts[chain[i]]) > 0) ci = i;
    }
    if (ci == 0) throw TriangulationError("degenerate pseudo-polygon");
    created.push_back(new_tri(F, B, chain[ci], inside));
    triangulate_fan(std::vector<int>(chain.begin(), chain.begin() + ci + 1), created, inside);
    triangulate_fan(std::vector<int>(chain.begin() + ci, chain.end()), created, inside);
  }

  void classify(const Polygon<S>& poly) {
    for (auto& t : tris) {
      if (!t.alive) continue;
      if (is_super(t.v[0]) || is_super(t.v[1]) || is_super(t.v[2])) {
        t.inside = false;
        continue;
      }
      Vec2<S> c{(pts[t.v[0]].x + pts[t.v[1]].x + pts[t.v[2]].x) / S(3),
                (pts[t.v[0]].y + pts[t.v[1]].y + pts[t.v[2]].y) / S(3)};
      t.inside = point_in_polygon(c, poly);
    }
  }
};

template <class S>
struct ChainInfo {
  BoundaryClass::Kind kind;
  int chain;
  std::vector<int> vertex_ids;
  bool closed;
};

template <class S>
struct BuildState {
  Cdt<S> cdt;
  std::vector<ChainInfo<S>> chains;
  int input_point_end = 3;

  static std::vector<Vec2<S>> all_points(const Polygon<S>& poly) {
    std::vector<Vec2<S>> all(poly.outer.begin(), poly.outer.end());
    for (const auto& h : poly.holes) all.insert(all.end(), h.begin(), h.end());
    for (const auto& s : poly.slits) all.insert(all.end(), s.begin(), s.end());
    return all;
  }

  explicit BuildState(const Polygon<S>& poly) : cdt(all_points(poly)) {
    auto insert_chain = [&](const std::vector<Vec2<S>>& chain, BoundaryClass::Kind kind, int index,
                            bool closed) {
      ChainInfo<S> info{kind, index, {}, closed};
      for (const auto& p : chain) info.vertex_ids.push_back(cdt.insert(p, -1));
      chains.push_back(std::move(info));
    };
    insert_chain(poly.outer, BoundaryClass::Outer, 0, true);
    for (std::size_t h = 0; h < poly.holes.size(); ++h)
      insert_chain(poly.holes[h], BoundaryClass::Hole, static_cast<int>(h), true);
    for (std::size_t s = 0; s < poly.slits.size(); ++s)
      insert_chain(poly.slits[s], BoundaryClass::SlitLeft, static_cast<int>(s), false);
    input_point_end = static_cast<int>(cdt.pts.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
      const auto& info = chains[c];
      std::size_t n = info.vertex_ids.size();
      std::size_t m = info.closed ? n : n - 1;
      for (std::size_t i = 0; i < m; ++i)
        cdt.insert_constraint(info.vertex_ids[i], info.vertex_ids[(i + 1) % n],
                              static_cast<int>(c));
    }
    cdt.classify(poly);
  }
};

// Whether the directed edge (u,v) runs along chain c in input order.
template <class S>
bool directed_along_chain(const BuildState<S>& st, int c, int u, int v) {
  const auto& ids = st.chains[c].vertex_ids;
  const auto& pts = st.cdt.pts;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    const Vec2<S>&A = pts[ids[i]], &B = pts[ids[i + 1]];
    const Vec2<S>&U = pts[u], &V = pts[v];
    if (orient2d(A, B, U) != 0 || orient2d(A, B, V) != 0) continue;
    auto within = [&](const Vec2<S>& P) { return sign(dot(A - P, B - P)) <= 0; };
    if (!within(U) || !within(V)) continue;
    return sign(dot(V - U, B - A)) > 0;
  }
  throw TriangulationError("slit edge not on its chain");
}

// Duplicate interior slit vertices so the two sides of each slit are
// disconnected. Left-side fans get the fresh vertex ids.
template <class S>
void split_slits(Triangulation<S>& out) {
  for (int cls = 0; cls < static_cast<int>(out.classes.size()); ++cls) {
    if (out.classes[cls].kind != BoundaryClass::SlitLeft) continue;
    std::unordered_map<std::uint64_t, int> dl;  // directed edge -> face
    for (std::size_t f = 0; f < out.faces.size(); ++f)
      for (int e = 0; e < 3; ++e)
        dl[dkey(out.faces[f].v[e], out.faces[f].v[(e + 1) % 3])] = static_cast<int>(f);
    std::vector<std::pair<int, int>> left_edges;
    for (std::size_t f = 0; f < out.faces.size(); ++f)
      for (int e = 0; e < 3; ++e)
        if (out.edge_class[f][e] == cls) left_edges.push_back({static_cast<int>(f), e});
    if (left_edges.empty()) continue;
    std::unordered_map<int, int> next_of;
    std::set<int> starts, ends;
    for (auto [f, e] : left_edges) {
      int u = out.faces[f].v[e], v = out.faces[f].v[(e + 1) % 3];
      next_of[u] = v;
      starts.insert(u);
      ends.insert(v);
    }
    int head = -1;
    for (int s : starts)
      if (!ends.count(s)) head = s;
    if (head < 0) throw TriangulationError("slit chain is closed");
    std::vector<int> order{head};
    while (next_of.count(order.back())) order.push_back(next_of[order.back()]);
    for (std::size_t i = 1; i + 1 < order.size(); ++i) {
      int w = order[i], prev = order[i - 1], next = order[i + 1];
      int nw = static_cast<int>(out.points.size());
      out.points.push_back(out.points[w]);
      auto cur = dl.find(dkey(prev, w));
      if (cur == dl.end()) throw TriangulationError("slit fan start missing");
      int f = cur->second, guard = 0;
      while (true) {
        if (++guard > 100000) throw TriangulationError("slit fan walk stuck");
        int ci = -1;
        for (int k = 0; k < 3; ++k)
          if (out.faces[f].v[k] == w) ci = k;
        if (ci < 0) throw TriangulationError("slit fan lost the vertex");
        bool is_out = out.faces[f].v[(ci + 1) % 3] == next && out.edge_class[f][ci] == cls;
        int y = out.faces[f].v[(ci + 1) % 3];
        out.faces[f].v[ci] = nw;
        if (is_out) break;
        auto nx = dl.find(dkey(y, w));
        if (nx == dl.end()) throw TriangulationError("slit fan walk left the mesh");
        f = nx->second;
      }
    }
  }
}

template <class S>
Triangulation<S> extract(const BuildState<S>& st) {
  const auto& cdt = st.cdt;
  Triangulation<S> out;
  std::vector<int> tri_id(cdt.tris.size(), -1);
  std::vector<int> vert_id(cdt.pts.size(), -1);
  for (std::size_t t = 0; t < cdt.tris.size(); ++t) {
    if (!cdt.tris[t].alive || !cdt.tris[t].inside) continue;
    tri_id[t] = static_cast<int>(out.faces.size());
    typename Triangulation<S>::Face f{};
    for (int i = 0; i < 3; ++i) {
      int v = cdt.tris[t].v[i];
      if (vert_id[v] < 0) {
        vert_id[v] = static_cast<int>(out.points.size());
        out.points.push_back(cdt.pts[v]);
      }
      f.v[i] = vert_id[v];
    }
    out.faces.push_back(f);
  }
  if (out.faces.empty()) throw TriangulationError("empty domain after carving");
  std::vector<int> chain_class(st.chains.size(), -1);
  std::vector<int> slit_right_class(st.chains.size(), -1);
  for (std::size_t c = 0; c < st.chains.size(); ++c) {
    chain_class[c] = static_cast<int>(out.classes.size());
    out.classes.push_back({st.chains[c].kind, st.chains[c].chain});
    if (st.chains[c].kind == BoundaryClass::SlitLeft) {
      slit_right_class[c] = static_cast<int>(out.classes.size());
      out.classes.push_back({BoundaryClass::SlitRight, st.chains[c].chain});
    }
  }
  out.edge_class.assign(out.faces.size(), {-1, -1, -1});
  for (std::size_t t = 0; t < cdt.tris.size(); ++t) {
    if (tri_id[t] < 0) continue;
    for (int e = 0; e < 3; ++e) {
      int u = cdt.tris[t].v[e], v = cdt.tris[t].v[(e + 1) % 3];
      auto it = cdt.constraint.find(ekey(u, v));
      if (it == cdt.constraint.end()) continue;
      int c = it->second;
      if (st.chains[c].kind == BoundaryClass::SlitLeft) {
        bool left = directed_along_chain(st, c, u, v);
        out.edge_class[tri_id[t]][e] = left ? chain_class[c] : slit_right_class[c];
      } else {
        out.edge_class[tri_id[t]][e] = chain_class[c];
      }
    }
  }
  split_slits(out);
  return out;
}

// --- refinement --------------------------------------------------------------

struct Circum {
  Vec2<double> center;
  double r2;
};

Circum circumcircle(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c) {
  Vec2<double> ab = b - a, ac = c - a;
  double d = 2 * cross(ab, ac);
  double ab2 = norm2(ab), ac2 = norm2(ac);
  Vec2<double> cc{a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
  return {cc, norm2(cc - a)};
}

double min_angle_rad(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c) {
  double la = norm(c - b), lb = norm(a - c), lc = norm(b - a);
  double area2 = std::abs(cross(b - a, c - a));
  double worst = std::min({area2 / (lb * lc), area2 / (la * lc), area2 / (la * lb)});
  return std::asin(std::min(1.0, worst));  // smallest angle is acute
}

class Refiner {
 public:
  Cdt<double>& cdt;
  RefineOptions opt;
  int input_point_end;

  Refiner(Cdt<double>& c, const RefineOptions& o, int input_end)
      : cdt(c), opt(o), input_point_end(input_end) {}

  std::vector<std::pair<int, int>> segments() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(cdt.constraint.size());
    for (auto& [k, c] : cdt.constraint)
      out.push_back({static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu)});
    return out;
  }

  bool encroached(int u, int v) const {
    for (auto [t, e] : {cdt.find_directed(u, v), cdt.find_directed(v, u)}) {
      if (t < 0) continue;
      int apex = cdt.tris[t].v[(e + 2) % 3];
      if (cdt.is_super(apex)) continue;
      if (sign(dot(cdt.pts[u] - cdt.pts[apex], cdt.pts[v] - cdt.pts[apex])) < 0) return true;
    }
    return false;
  }

  // Split a subsegment; off-center near input vertices so that acute input
  // corners settle on concentric shells instead of cascading.
  int split_segment(int u, int v) {
    const Vec2<double>&pu = cdt.pts[u], &pv = cdt.pts[v];
    double len = norm(pv - pu);
    double frac = 0.5;
    bool u_in = u < input_point_end, v_in = v < input_point_end;
    if (u_in != v_in) {
      double d = std::exp2(std::round(std::log2(len * 0.5)));
      d = std::clamp(d, 0.3 * len, 0.7 * len);
      frac = u_in ? d / len : 1.0 - d / len;
    }
    Vec2<double> p{pu.x + (pv.x - pu.x) * frac, pu.y + (pv.y - pu.y) * frac};
    auto [t, e] = cdt.find_directed(u, v);
    if (t < 0) std::tie(t, e) = cdt.find_directed(v, u);
    if (t < 0) throw TriangulationError("lost subsegment");
    return cdt.insert(p, t);
  }

  void clear_encroachment() {
    bool again = true;
    while (again) {
      if (cdt.insertions > opt.max_insertions)
        throw TriangulationError("refinement did not settle");
      again = false;
      for (auto [u, v] : segments())
        if (cdt.constraint.count(ekey(u, v)) && encroached(u, v)) {
          split_segment(u, v);
          again = true;
        }
    }
  }

  bool is_bad(int t) const {
    const auto& tr = cdt.tris[t];
    if (!tr.alive || !tr.inside) return false;
    const auto &a = cdt.pts[tr.v[0]], &b = cdt.pts[tr.v[1]], &c = cdt.pts[tr.v[2]];
    if (opt.target_edge > 0) {
      double cap2 = opt.target_edge * opt.target_edge;
      if (norm2(b - a) > cap2 || norm2(c - b) > cap2 || norm2(a - c) > cap2) return true;
    }
    if (opt.min_angle_deg > 0 &&
        min_angle_rad(a, b, c) < opt.min_angle_deg * std::numbers::pi / 180.0)
      return true;
    return false;
  }

  void run() {
    clear_encroachment();
    std::deque<int> queue;
    for (int t = 0; t < static_cast<int>(cdt.tris.size()); ++t)
      if (cdt.tris[t].alive) queue.push_back(t);
    cdt.dirty.clear();
    while (!queue.empty()) {
      if (cdt.insertions > opt.max_insertions)
        throw TriangulationError("refinement did not settle");
      int t = queue.front();
      queue.pop_front();
      if (!is_bad(t)) continue;
      handle_bad_face(t);
      clear_encroachment();
      for (int d : cdt.dirty) queue.push_back(d);
      cdt.dirty.clear();
    }
    // Final sweep in case queue bookkeeping missed anything.
    for (int t = 0; t < static_cast<int>(cdt.tris.size()); ++t)
      if (is_bad(t)) {
        handle_bad_face(t);
        clear_encroachment();
        for (int d : cdt.dirty) queue.push_back(d);
        cdt.dirty.clear();
        while (!queue.empty()) {
          if (cdt.insertions > opt.max_insertions)
            throw TriangulationError("refinement did not settle");
          int q = queue.front();
          queue.pop_front();
          if (!is_bad(q)) continue;
          handle_bad_face(q);
          clear_encroachment();
          for (int d : cdt.dirty) queue.push_back(d);
          cdt.dirty.clear();
        }
        t = -1;  // restart scan
      }
  }

  void handle_bad_face(int t) {
    const auto& tr = cdt.tris[t];
    Circum cc = circumcircle(cdt.pts[tr.v[0]], cdt.pts[tr.v[1]], cdt.pts[tr.v[2]]);
    // A circumcenter that encroaches a subsegment splits that segment instead.
    for (auto [u, v] : segments()) {
      if (sign(dot(cdt.pts[u] - cc.center, cdt.pts[v] - cc.center)) < 0) {
        split_segment(u, v);
        return;
      }
    }
    auto loc = cdt.locate(cc.center, t);
    if (loc.edge == -2 || !cdt.tris[loc.tri].inside) {
      split_longest_edge(t);
      return;
    }
    cdt.insert(cc.center, loc.tri);
  }

  void split_longest_edge(int t) {
    const auto& tr = cdt.tris[t];
    int longest = 0;
    double best = -1;
    for (int e = 0; e < 3; ++e) {
      double l = norm2(cdt.pts[tr.v[(e + 1) % 3]] - cdt.pts[tr.v[e]]);
      if (l > best) {
        best = l;
        longest = e;
      }
    }
    int u = tr.v[longest], v = tr.v[(longest + 1) % 3];
    if (cdt.constrained(u, v)) {
      split_segment(u, v);
      return;
    }
    Vec2<double> mid{(cdt.pts[u].x + cdt.pts[v].x) / 2, (cdt.pts[u].y + cdt.pts[v].y) / 2};
    cdt.insert(mid, t);
  }
};

}  // namespace

template <class S>
Triangulation<S> triangulate_polygon(const Polygon<S>& poly) {
  auto rep = validate_polygon(poly);
  if (!rep.valid)
    throw TriangulationError("invalid polygon: " +
                             (rep.issues.empty() ? std::string("?") : rep.issues[0].message));
  BuildState<S> st(poly);
  return extract(st);
}

Triangulation<double> refine_polygon(const Polygon<double>& poly, const RefineOptions& opt,
                                     MeshQuality* quality) {
  auto rep = validate_polygon(poly);
  if (!rep.valid)
    throw TriangulationError("invalid polygon: " +
                             (rep.issues.empty() ? std::string("?") : rep.issues[0].message));
  BuildState<double> st(poly);
  Refiner ref(st.cdt, opt, st.input_point_end);
  ref.run();
  st.cdt.classify(poly);
  auto out = extract(st);
  if (quality) {
    quality->min_angle_deg = 180.0;
    quality->max_edge = 0;
    quality->steiner_points = static_cast<int>(out.points.size());
    for (const auto& f : out.faces) {
      const auto &a = out.points[f.v[0]], &b = out.points[f.v[1]], &c = out.points[f.v[2]];
      quality->min_angle_deg =
          std::min(quality->min_angle_deg, min_angle_rad(a, b, c) * 180.0 / std::numbers::pi);
      quality->max_edge = std::max({quality->max_edge, norm(b - a), norm(c - b), norm(a - c)});
    }
  }
  return out;
}

template Triangulation<double> triangulate_polygon(const Polygon<double>&);
template Triangulation<Rational> triangulate_polygon(const Polygon<Rational>&);

}  // namespace escs
