#pragma once
// Bounded convex polyhedra with an explicit face lattice, exact halfspace
// clipping and an incremental convex hull.

#include <leis/geometry.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <set>
#include <utility>

namespace leis {

enum class Membership { Inside, Boundary, Outside };

struct Face {
  HalfSpace plane;          // outward: the polyhedron is { plane.side <= 0 }
  std::vector<int> cycle;   // vertex indices, counter-clockwise seen from outside
  bool artificial = false;  // lies on the clipping box
  int tag = -1;             // caller-supplied id of the defining halfspace
};

class Polyhedron {
 public:
  std::vector<Point3> vertices;
  std::vector<Face> faces;

  static Polyhedron from_box(const Box& b) {
    Polyhedron p;
    p.vertices = {{b.xmin, b.ymin, b.zmin}, {b.xmax, b.ymin, b.zmin}, {b.xmax, b.ymax, b.zmin},
                  {b.xmin, b.ymax, b.zmin}, {b.xmin, b.ymin, b.zmax}, {b.xmax, b.ymin, b.zmax},
                  {b.xmax, b.ymax, b.zmax}, {b.xmin, b.ymax, b.zmax}};
    auto add = [&](Scalar nx, Scalar ny, Scalar nz, Scalar d, std::vector<int> c) {
      p.faces.push_back({{nx, ny, nz, d}, std::move(c), true, -1});
    };
    add(0, 0, -1, -b.zmin, {0, 3, 2, 1});
    add(0, 0, 1, b.zmax, {4, 5, 6, 7});
    add(0, -1, 0, -b.ymin, {0, 1, 5, 4});
    add(0, 1, 0, b.ymax, {2, 3, 7, 6});
    add(-1, 0, 0, -b.xmin, {0, 4, 7, 3});
    add(1, 0, 0, b.xmax, {1, 2, 6, 5});
    return p;
  }

  bool empty() const { return faces.empty(); }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t face_count() const { return faces.size(); }
  std::size_t edge_count() const {
    std::size_t s = 0;
    for (const auto& f : faces) s += f.cycle.size();
    return s / 2;
  }
  std::size_t complexity() const { return vertex_count() + edge_count() + face_count(); }

  std::size_t real_face_count() const {
    std::size_t n = 0;
    for (const auto& f : faces) n += !f.artificial;
    return n;
  }

  /// Undirected edges as sorted vertex index pairs.
  std::vector<std::pair<int, int>> edges() const {
    std::set<std::pair<int, int>> es;
    for (const auto& f : faces)
      for (std::size_t i = 0; i < f.cycle.size(); ++i) {
        int a = f.cycle[i], b = f.cycle[(i + 1) % f.cycle.size()];
        es.insert({std::min(a, b), std::max(a, b)});
      }
    return {es.begin(), es.end()};
  }

  /// Vertex adjacency lists.
  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (auto [a, b] : edges()) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  Membership classify(const Point3& q) const {
    if (empty()) return Membership::Outside;
    bool on = false;
    for (const auto& f : faces) {
      int s = sign(f.plane.side(q));
      if (s > 0) return Membership::Outside;
      if (s == 0) on = true;
    }
    return on ? Membership::Boundary : Membership::Inside;
  }

  bool contains(const Point3& q) const { return classify(q) != Membership::Outside; }

  /// Closed containment of q + e1*d[0] + e1^2*d[1] + ... for an infinitesimal e1.
  bool contains_perturbed(const Point3& q, const std::vector<Point3>& dirs) const {
    if (empty()) return false;
    for (const auto& f : faces) {
      int s = sign(f.plane.side(q));
      for (std::size_t i = 0; s == 0 && i < dirs.size(); ++i) s = sign(dot(f.plane.normal(), dirs[i]));
      if (s > 0) return false;
    }
    return true;
  }

  Point3 centroid() const {
    Point3 c{0, 0, 0};
    for (const auto& v : vertices) c = c + v;
    return c * ratio(1, static_cast<long>(vertices.size()));
  }

  /// Intersection with the closed halfspace. The result is empty unless it
  /// has positive volume.
  Polyhedron clipped(const HalfSpace& h, bool artificial = false, int tag = -1) const {
    if (empty()) return {};
    const std::size_t n = vertices.size();
    std::vector<Scalar> s(n);
    std::vector<int> sg(n);
    bool any_in = false, any_out = false;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = h.side(vertices[i]);
      sg[i] = sign(s[i]);
      any_in |= sg[i] < 0;
      any_out |= sg[i] > 0;
    }
    if (!any_in) return {};
    if (!any_out) return *this;

    Polyhedron out;
    std::vector<int> remap(n, -1);
    std::vector<int> cap;
    for (std::size_t i = 0; i < n; ++i)
      if (sg[i] <= 0) {
        remap[i] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(vertices[i]);
        if (sg[i] == 0) cap.push_back(remap[i]);
      }
    std::map<std::pair<int, int>, int> split;
    auto split_vertex = [&](int a, int b) {
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = split.find(key);
      if (it != split.end()) return it->second;
      Scalar t = s[a] / (s[a] - s[b]);
      out.vertices.push_back(vertices[a] + (vertices[b] - vertices[a]) * t);
      int id = static_cast<int>(out.vertices.size()) - 1;
      split.emplace(key, id);
      cap.push_back(id);
      return id;
    };
    for (const auto& f : faces) {
      Face nf{f.plane, {}, f.artificial, f.tag};
      const std::size_t m = f.cycle.size();
      for (std::size_t i = 0; i < m; ++i) {
        int a = f.cycle[i], b = f.cycle[(i + 1) % m];
        if (sg[a] <= 0) nf.cycle.push_back(remap[a]);
        if ((sg[a] < 0 && sg[b] > 0) || (sg[a] > 0 && sg[b] < 0)) nf.cycle.push_back(split_vertex(a, b));
      }
      if (nf.cycle.size() >= 3) out.faces.push_back(std::move(nf));
    }
    bool face_on_plane = false;
    for (const auto& f : out.faces) {
      bool all = true;
      for (int v : f.cycle) all &= sign(h.side(out.vertices[v])) == 0;
      if (all) face_on_plane = true;
    }
    if (!face_on_plane && cap.size() >= 3) {
      out.faces.push_back({h, order_cycle(out.vertices, cap, h.normal()), artificial, tag});
    }
    out.compact();
    return out;
  }

  Polyhedron clipped_all(const std::vector<HalfSpace>& hs) const {
    Polyhedron p = *this;
    for (const auto& h : hs) {
      p = p.clipped(h);
      if (p.empty()) break;
    }
    return p;
  }

  /// Sorts coplanar points counter-clockwise around `normal`.
  static std::vector<int> order_cycle(const std::vector<Point3>& pts, std::vector<int> idx,
                                      const Point3& normal) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    int axis = 2;
    Scalar ax = abs(normal.x), ay = abs(normal.y), az = abs(normal.z);
    if (ax >= ay && ax >= az) axis = 0;
    else if (ay >= az) axis = 1;
    auto proj = [&](const Point3& p) -> Point2 {
      if (axis == 0) return {p.y, p.z};
      if (axis == 1) return {p.z, p.x};
      return {p.x, p.y};
    };
    const Scalar& nk = axis == 0 ? normal.x : axis == 1 ? normal.y : normal.z;
    Point2 c{0, 0};
    for (int i : idx) {
      Point2 q = proj(pts[i]);
      c.x += q.x;
      c.y += q.y;
    }
    c.x /= static_cast<long>(idx.size());
    c.y /= static_cast<long>(idx.size());
    auto half = [](const Point2& d) { return (sign(d.y) > 0 || (sign(d.y) == 0 && sign(d.x) > 0)) ? 0 : 1; };
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
      Point2 a = proj(pts[i]), b = proj(pts[j]);
      Point2 da{a.x - c.x, a.y - c.y}, db{b.x - c.x, b.y - c.y};
      int ha = half(da), hb = half(db);
      if (ha != hb) return ha < hb;
      return sign(da.x * db.y - da.y * db.x) > 0;
    });
    if (sign(nk) < 0) std::reverse(idx.begin(), idx.end());
    return idx;
  }

  /// Removes unreferenced vertices.
  void compact() {
    std::vector<int> used(vertices.size(), -1);
    std::vector<Point3> nv;
    for (auto& f : faces)
      for (int& v : f.cycle) {
        if (used[v] < 0) {
          used[v] = static_cast<int>(nv.size());
          nv.push_back(vertices[v]);
        }
        v = used[v];
      }
    vertices = std::move(nv);
  }

  /// Convexity and Euler checks; used by validators and tests.
  bool valid() const {
    if (empty()) return false;
    for (const auto& f : faces)
      for (const auto& v : vertices)
        if (sign(f.plane.side(v)) > 0) return false;
    return static_cast<long>(vertex_count()) - static_cast<long>(edge_count()) +
               static_cast<long>(face_count()) ==
           2;
  }

  std::vector<HalfSpace> halfspaces(bool include_artificial = true) const {
    std::vector<HalfSpace> hs;
    for (const auto& f : faces)
      if (include_artificial || !f.artificial) hs.push_back(f.plane);
    return hs;
  }

  /// Axis-aligned bounds, for cheap disjointness rejection.
  Box bounds() const {
    Box b{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y, vertices[0].z, vertices[0].z};
    for (const auto& v : vertices) {
      b.xmin = min(b.xmin, v.x);
      b.xmax = max(b.xmax, v.x);
      b.ymin = min(b.ymin, v.y);
      b.ymax = max(b.ymax, v.y);
      b.zmin = min(b.zmin, v.z);
      b.zmax = max(b.zmax, v.z);
    }
    return b;
  }
};

inline bool boxes_overlap(const Box& a, const Box& b) {
  return a.xmin < b.xmax && b.xmin < a.xmax && a.ymin < b.ymax && b.ymin < a.ymax && a.zmin < b.zmax &&
         b.zmin < a.zmax;
}

/// True iff the interiors of two convex polyhedra intersect.
inline bool interiors_intersect(const Polyhedron& a, const Polyhedron& b) {
  if (a.empty() || b.empty()) return false;
  if (!boxes_overlap(a.bounds(), b.bounds())) return false;
  return !a.clipped_all(b.halfspaces()).empty();
}

inline Membership polytope_membership(const Polyhedron& p, const Point3& q) {
  if (!p.valid()) throw std::invalid_argument("polytope_membership: invalid polytope");
  return p.classify(q);
}

/// Triangulated convex hull maintained under point insertion. Faces visible
/// only in the weak sense (point on the supporting plane) are kept, so coplanar
/// triangles may coexist.
class IncrementalHull {
 public:
  struct Tri {
    std::array<int, 3> v;
    HalfSpace h;
    bool alive = true;
  };

  std::vector<Point3> points;
  std::vector<Tri> tris;

  /// Starts from the first four affinely independent points; the rest are inserted.
  explicit IncrementalHull(const std::vector<Point3>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw std::invalid_argument("convex_hull: fewer than 4 points");
    points = pts;
    int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
    for (int i = 1; i < n && i1 < 0; ++i)
      if (!(pts[i] == pts[i0])) i1 = i;
    if (i1 < 0) throw std::invalid_argument("convex_hull: degenerate input");
    for (int i = 1; i < n && i2 < 0; ++i) {
      Point3 c = cross(pts[i1] - pts[i0], pts[i] - pts[i0]);
      if (sign(c.x) || sign(c.y) || sign(c.z)) i2 = i;
    }
    if (i2 < 0) throw std::invalid_argument("convex_hull: collinear input");
    HalfSpace base = HalfSpace::through(pts[i0], pts[i1], pts[i2]);
    for (int i = 1; i < n && i3 < 0; ++i)
      if (sign(base.side(pts[i])) != 0) i3 = i;
    if (i3 < 0) throw std::invalid_argument("convex_hull: coplanar input");
    if (sign(base.side(pts[i3])) > 0) {
      make(i0, i2, i1);
      make(i0, i1, i3);
      make(i1, i2, i3);
      make(i2, i0, i3);
    } else {
      make(i0, i1, i2);
      make(i0, i3, i1);
      make(i1, i3, i2);
      make(i2, i3, i0);
    }
    for (int p = 0; p < n; ++p)
      if (p != i0 && p != i1 && p != i2 && p != i3) insert_index(p, -1);
  }

  /// Adds q; `seed` may name a triangle known to be visible from q. Returns
  /// the ids of the new triangles (empty when q is inside).
  std::vector<int> insert(const Point3& q, int seed = -1) {
    points.push_back(q);
    return insert_index(static_cast<int>(points.size()) - 1, seed);
  }

  int neighbor(int t, int e) const {
    const auto& v = tris[t].v;
    return owner_.at(key(v[(e + 1) % 3], v[e]));
  }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }
  int make(int a, int b, int c) {
    tris.push_back({{a, b, c}, HalfSpace::through(points[a], points[b], points[c])});
    int t = static_cast<int>(tris.size()) - 1;
    for (int e = 0; e < 3; ++e) owner_[key(tris[t].v[e], tris[t].v[(e + 1) % 3])] = t;
    return t;
  }
  bool visible(int t, const Point3& q) const { return sign(tris[t].h.side(q)) > 0; }

  std::vector<int> insert_index(int p, int seed) {
    const Point3& q = points[p];
    std::vector<int> vis;
    std::unordered_set<int> in_vis;
    if (seed >= 0 && tris[seed].alive && visible(seed, q)) {
      vis.push_back(seed);
      in_vis.insert(seed);
      for (std::size_t i = 0; i < vis.size(); ++i)
        for (int e = 0; e < 3; ++e) {
          int nb = neighbor(vis[i], e);
          if (!in_vis.count(nb) && visible(nb, q)) {
            in_vis.insert(nb);
            vis.push_back(nb);
          }
        }
    } else {
      for (int t = 0; t < static_cast<int>(tris.size()); ++t)
        if (tris[t].alive && visible(t, q)) {
          vis.push_back(t);
          in_vis.insert(t);
        }
    }
    if (vis.empty()) return {};
    std::vector<std::pair<int, int>> horizon;
    for (int t : vis)
      for (int e = 0; e < 3; ++e)
        if (!in_vis.count(neighbor(t, e))) horizon.push_back({tris[t].v[e], tris[t].v[(e + 1) % 3]});
    for (int t : vis) {
      tris[t].alive = false;
      for (int e = 0; e < 3; ++e) owner_.erase(key(tris[t].v[e], tris[t].v[(e + 1) % 3]));
    }
    std::vector<int> created;
    for (auto [a, b] : horizon) created.push_back(make(a, b, p));
    return created;
  }

  std::unordered_map<std::uint64_t, int> owner_;
};

/// Exact convex hull. Throws when the points do not span 3D.
inline Polyhedron convex_hull(const std::vector<Point3>& pts) {
  IncrementalHull hull(pts);
  const auto& tris = hull.tris;
  const int nt = static_cast<int>(tris.size());
  // Merge coplanar neighbouring triangles into faces.
  std::vector<int> group(nt, -1);
  int groups = 0;
  for (int t = 0; t < nt; ++t) {
    if (!tris[t].alive || group[t] >= 0) continue;
    group[t] = groups;
    std::vector<int> stack{t};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int e = 0; e < 3; ++e) {
        int nb = hull.neighbor(u, e);
        if (group[nb] >= 0) continue;
        bool coplanar = true;
        for (int k = 0; k < 3 && coplanar; ++k) coplanar = sign(tris[t].h.side(hull.points[tris[nb].v[k]])) == 0;
        if (!coplanar) continue;
        group[nb] = groups;
        stack.push_back(nb);
      }
    }
    ++groups;
  }
  // Directed boundary edges per face; a point is a vertex iff it touches three faces.
  std::vector<std::map<int, int>> next(groups);
  std::vector<int> first_tri(groups, -1);
  std::vector<std::set<int>> touching(hull.points.size());
  for (int t = 0; t < nt; ++t) {
    if (!tris[t].alive) continue;
    int g = group[t];
    if (first_tri[g] < 0) first_tri[g] = t;
    for (int e = 0; e < 3; ++e) {
      int a = tris[t].v[e], b = tris[t].v[(e + 1) % 3];
      touching[a].insert(g);
      if (group[hull.neighbor(t, e)] != g) next[g][a] = b;
    }
  }
  Polyhedron poly;
  std::vector<int> remap(hull.points.size(), -1);
  for (int g = 0; g < groups; ++g) {
    Face f{tris[first_tri[g]].h, {}, false, -1};
    int start = next[g].begin()->first, v = start;
    do {
      if (touching[v].size() >= 3) {
        if (remap[v] < 0) {
          remap[v] = static_cast<int>(poly.vertices.size());
          poly.vertices.push_back(hull.points[v]);
        }
        f.cycle.push_back(remap[v]);
      }
      v = next[g].at(v);
    } while (v != start);
    poly.faces.push_back(std::move(f));
  }
  return poly;
}

/// Polytope = box intersected with halfspaces; box faces stay flagged artificial.
inline Polyhedron halfspace_intersection(const Box& box, const std::vector<HalfSpace>& hs) {
  return Polyhedron::from_box(box).clipped_all(hs);
}

}  // namespace leis
