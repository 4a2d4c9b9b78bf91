#pragma once
// Point location in the overlay of m convex polytopes.
//
// Each polytope P_j contributes two total functions over the box: U'_j (its
// upper hull over its projection, the box floor elsewhere) and L'_j (its lower
// hull, the box ceiling elsewhere). q lies in P_j iff L'_j <= q.z <= U'_j. The
// surface S_i is the i-th smallest of the 2m functions and S_2m is the box
// ceiling. Every surface is triangulated over one common planar subdivision
// on which all 2m functions are linear and totally ordered; an anchor is a
// triangle of some S_i and stores which polytopes contain the region just
// below it.

#include <leis/terrain.hpp>

#include <bit>
#include <cstdint>
#include <set>

namespace leis {

namespace poly2 {

using Polygon = std::vector<Point2>;

inline Polygon convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && sign(orient2d(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && sign(orient2d(h[k - 2], h[k - 1], pts[i])) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

/// Drops repeated and collinear vertices.
inline Polygon clean(const Polygon& p) {
  Polygon q;
  for (const auto& v : p)
    if (q.empty() || !(q.back() == v)) q.push_back(v);
  while (q.size() > 1 && q.front() == q.back()) q.pop_back();
  bool changed = true;
  while (changed && q.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& a = q[(i + q.size() - 1) % q.size()];
      const auto& c = q[(i + 1) % q.size()];
      if (sign(orient2d(a, q[i], c)) == 0) {
        q.erase(q.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return q.size() >= 3 ? q : Polygon{};
}

/// Halfplane to the left of the directed edge a -> b, as a x + b y + c <= 0.
inline std::array<Scalar, 3> right_of(const Point2& a, const Point2& b) {
  // Keep points with orient2d(a, b, p) >= 0.
  Scalar A = b.y - a.y, B = -(b.x - a.x);
  return {A, B, -(A * a.x + B * a.y)};
}

inline Polygon intersect(Polygon p, const Polygon& convex) {
  for (std::size_t i = 0; i < convex.size() && !p.empty(); ++i) {
    auto h = right_of(convex[i], convex[(i + 1) % convex.size()]);
    p = clip_polygon(p, h[0], h[1], h[2]);
  }
  return clean(p);
}

/// Convex pieces of box \ convex.
inline std::vector<Polygon> difference(const Polygon& box, const Polygon& convex) {
  std::vector<Polygon> out;
  Polygon rest = box;
  for (std::size_t i = 0; i < convex.size() && !rest.empty(); ++i) {
    auto h = right_of(convex[i], convex[(i + 1) % convex.size()]);
    Polygon outside = clean(clip_polygon(rest, -h[0], -h[1], -h[2]));
    if (!outside.empty()) out.push_back(outside);
    rest = clean(clip_polygon(rest, h[0], h[1], h[2]));
  }
  return out;
}

struct Bounds {
  Scalar xmin, xmax, ymin, ymax;
  bool overlaps(const Bounds& o) const { return xmin < o.xmax && o.xmin < xmax && ymin < o.ymax && o.ymin < ymax; }
};

inline Bounds bounds(const Polygon& p) {
  Bounds b{p[0].x, p[0].x, p[0].y, p[0].y};
  for (const auto& v : p) {
    b.xmin = min(b.xmin, v.x);
    b.xmax = max(b.xmax, v.x);
    b.ymin = min(b.ymin, v.y);
    b.ymax = max(b.ymax, v.y);
  }
  return b;
}

}  // namespace poly2

/// Graph z = a x + b y + c of a non-vertical face plane.
inline Plane face_function(const HalfSpace& h) { return {-h.nx / h.nz, -h.ny / h.nz, h.d / h.nz}; }

struct OverlayLocation {
  int anchor = -1;
  int surface = -1;
  int triangle = -1;
  std::uint64_t members = 0;
  std::size_t steps = 0;     // binary-search probes, one planar location each
  std::size_t pl_steps = 0;  // node visits inside the planar locator
};

class OverlayIndex {
 public:
  Box box;
  std::size_t m = 0;

  struct Cell {
    poly2::Polygon poly;
    std::vector<Plane> f;           // the 2m functions then the ceiling, linear on this cell
    std::vector<int> order;         // function index of S_i, i = 0..2m
    std::vector<std::uint64_t> member;  // per surface: polytopes containing the region below S_i
  };
  struct Tri {
    std::array<Point2, 3> xy;
    int cell;
    std::vector<std::array<int, 3>> links;  // per polytope: linked-surface triangle above each corner
  };

  std::vector<Cell> cells;
  std::vector<Tri> tris;

  std::size_t surface_count() const { return 2 * m + 1; }
  std::size_t anchor_count() const { return tris.size() * surface_count(); }
  int anchor_id(int surface, int tri) const { return surface * static_cast<int>(tris.size()) + tri; }
  int anchor_surface(int a) const { return a / static_cast<int>(tris.size()); }
  int anchor_tri(int a) const { return a % static_cast<int>(tris.size()); }

  std::uint64_t membership(int a) const {
    const Tri& t = tris[anchor_tri(a)];
    return cells[t.cell].member[anchor_surface(a)];
  }
  std::vector<int> membership_list(int a) const {
    std::vector<int> out;
    std::uint64_t b = membership(a);
    for (std::size_t j = 0; j < m; ++j)
      if (b >> j & 1) out.push_back(static_cast<int>(j));
    return out;
  }

  Triangle anchor_triangle(int a) const {
    const Tri& t = tris[anchor_tri(a)];
    const Plane& h = cells[t.cell].f[cells[t.cell].order[anchor_surface(a)]];
    Triangle T;
    for (int c = 0; c < 3; ++c) T.p[c] = {t.xy[c].x, t.xy[c].y, h.eval(t.xy[c])};
    T.plane = h;
    return T;
  }

  /// Height of S_i above p (p inside the box).
  Scalar surface_height(std::size_t i, const Point2& p, std::size_t* pl = nullptr) const {
    int t = locator_.locate(p, pl);
    const Cell& c = cells[tris[t].cell];
    return c.f[c.order[i]].eval(p);
  }

  /// Anchor directly above q: binary search for the lowest surface strictly above q.
  OverlayLocation locate_anchor(const Point3& q) const {
    if (!box.contains(q) || q.z >= box.zmax) throw std::out_of_range("locate_anchor: query outside the box");
    OverlayLocation r;
    std::size_t lo = 0, hi = 2 * m;
    int tri = -1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      ++r.steps;
      tri = locator_.locate(q.xy(), &r.pl_steps);
      const Cell& c = cells[tris[tri].cell];
      if (c.f[c.order[mid]].eval(q) > q.z) hi = mid;
      else lo = mid + 1;
    }
    if (tri < 0) {
      ++r.steps;
      tri = locator_.locate(q.xy(), &r.pl_steps);
    }
    r.surface = static_cast<int>(lo);
    r.triangle = tri;
    r.anchor = anchor_id(r.surface, tri);
    r.members = cells[tris[tri].cell].member[lo];
    return r;
  }

  void index() {
    std::vector<PlanarLocator::Tri2> t2;
    for (const auto& t : tris) t2.push_back(t.xy);
    locator_ = PlanarLocator(t2);
  }

 private:
  PlanarLocator locator_;
};

namespace detail {

struct Piece {
  poly2::Polygon poly;
  poly2::Bounds bb;
  Plane f;
};

// Projected upper (or lower) faces of P plus the outside pieces carrying `outside_z`.
inline std::vector<Piece> hull_family(const Polyhedron& P, bool upper, const poly2::Polygon& box,
                                      const poly2::Polygon& shadow, const Scalar& outside_z) {
  std::vector<Piece> out;
  for (const auto& f : P.faces) {
    int s = sign(f.plane.nz);
    if (s == 0 || (s > 0) != upper) continue;
    poly2::Polygon g;
    for (int v : f.cycle) g.push_back(P.vertices[v].xy());
    if (!upper) std::reverse(g.begin(), g.end());
    g = poly2::clean(g);
    if (g.empty()) continue;
    out.push_back({g, poly2::bounds(g), face_function(f.plane)});
  }
  for (auto& g : poly2::difference(box, shadow)) out.push_back({g, poly2::bounds(g), Plane{0, 0, outside_z}});
  return out;
}

}  // namespace detail

/// Builds the overlay index. `link_surfaces[j]`, when given and non-null, is a
/// terrain bounding P_j from above; anchors inside P_j then record the
/// triangle of that terrain above each of their corners.
inline OverlayIndex build_overlay_index(const std::vector<Polyhedron>& S, const Box& box,
                                        const std::vector<const Terrain*>& link_surfaces = {}) {
  if (S.empty()) throw std::invalid_argument("build_overlay_index: no polytopes");
  if (S.size() > 64) throw std::invalid_argument("build_overlay_index: more than 64 polytopes");
  for (const auto& P : S)
    if (!P.valid()) throw std::invalid_argument("build_overlay_index: polytope is not convex");
  OverlayIndex idx;
  idx.box = box;
  idx.m = S.size();
  const std::size_t m = S.size();
  poly2::Polygon boxp = box_polygon(box);

  struct Work {
    poly2::Polygon poly;
    poly2::Bounds bb;
    std::vector<Plane> f;
  };
  std::vector<Work> cells{{boxp, poly2::bounds(boxp), {}}};
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Point2> proj;
    for (const auto& v : S[j].vertices) proj.push_back(v.xy());
    poly2::Polygon shadow = poly2::convex_hull(proj);
    for (bool upper : {true, false}) {
      auto fam = detail::hull_family(S[j], upper, boxp, shadow, upper ? box.zmin : box.zmax);
      std::vector<Work> next;
      for (const auto& c : cells)
        for (const auto& pc : fam) {
          if (!c.bb.overlaps(pc.bb)) continue;
          auto g = poly2::intersect(c.poly, pc.poly);
          if (g.empty()) continue;
          Work w{g, poly2::bounds(g), c.f};
          w.f.push_back(pc.f);
          next.push_back(std::move(w));
        }
      cells = std::move(next);
    }
  }
  // Split by every crossing of two functions so that the order is constant.
  std::vector<Work> fine;
  for (auto& c : cells) {
    std::vector<poly2::Polygon> parts{c.poly};
    for (std::size_t a = 0; a < c.f.size(); ++a)
      for (std::size_t b = a + 1; b < c.f.size(); ++b) {
        Scalar A = c.f[a].a - c.f[b].a, B = c.f[a].b - c.f[b].b, C = c.f[a].c - c.f[b].c;
        if (sign(A) == 0 && sign(B) == 0) continue;
        std::vector<poly2::Polygon> split;
        for (auto& p : parts) {
          auto lo = poly2::clean(clip_polygon(p, A, B, C));
          auto hi = poly2::clean(clip_polygon(p, -A, -B, -C));
          if (!lo.empty() && !hi.empty()) {
            split.push_back(std::move(lo));
            split.push_back(std::move(hi));
          } else {
            split.push_back(std::move(p));
          }
        }
        parts = std::move(split);
      }
    for (auto& p : parts) fine.push_back({std::move(p), {}, c.f});
  }

  for (auto& w : fine) {
    OverlayIndex::Cell cell;
    cell.poly = std::move(w.poly);
    cell.f = std::move(w.f);  // U'_0, L'_0, U'_1, L'_1, ...
    cell.f.push_back(Plane{0, 0, box.zmax});
    Point2 c = vertex_centroid(cell.poly);
    std::vector<Scalar> val;
    for (const auto& f : cell.f) val.push_back(f.eval(c));
    cell.order.resize(2 * m);
    for (std::size_t i = 0; i < 2 * m; ++i) cell.order[i] = static_cast<int>(i);
    std::sort(cell.order.begin(), cell.order.end(), [&](int a, int b) {
      if (val[a] != val[b]) return val[a] < val[b];
      return a < b;
    });
    cell.order.push_back(static_cast<int>(2 * m));
    for (std::size_t i = 0; i <= 2 * m; ++i) {
      const Scalar& s = val[cell.order[i]];
      std::uint64_t bits = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (val[2 * j + 1] < s && s <= val[2 * j]) bits |= std::uint64_t{1} << j;
      cell.member.push_back(bits);
    }
    int id = static_cast<int>(idx.cells.size());
    for (std::size_t i = 1; i + 1 < cell.poly.size(); ++i)
      idx.tris.push_back({{cell.poly[0], cell.poly[i], cell.poly[i + 1]}, id, {}});
    idx.cells.push_back(std::move(cell));
  }

  if (!link_surfaces.empty()) {
    for (auto& t : idx.tris) {
      t.links.assign(m, {-1, -1, -1});
      std::uint64_t any = 0;
      for (auto b : idx.cells[t.cell].member) any |= b;
      for (std::size_t j = 0; j < m && j < link_surfaces.size(); ++j) {
        if (!link_surfaces[j] || !(any >> j & 1)) continue;
        for (int c = 0; c < 3; ++c) t.links[j][c] = link_surfaces[j]->locate(t.xy[c]);
      }
    }
  }
  idx.index();
  return idx;
}

/// Feature counts of the arrangement formed by the boundaries of the polytopes.
struct OverlayStats {
  std::size_t m = 0, n = 0;  // n = total complexity V + E + F of the inputs
  std::size_t v1 = 0;        // original vertices
  std::size_t v2 = 0;        // an edge of one polytope crossing the boundary of another
  std::size_t v3 = 0;        // three faces of three distinct polytopes
  std::size_t vertices = 0, edges = 0, faces = 0;
  std::size_t total() const { return vertices + edges + faces; }
};

namespace detail {

// Parameter interval of p + t (q - p), t in [0, 1], inside P (closed).
inline std::optional<std::pair<Scalar, Scalar>> clip_segment(const Point3& p, const Point3& q,
                                                             const Polyhedron& P, int skip_a = -1,
                                                             int skip_b = -1,
                                                             const Polyhedron* Q = nullptr) {
  Scalar lo = 0, hi = 1;
  auto apply = [&](const Polyhedron& X, int skip) {
    for (std::size_t i = 0; i < X.faces.size(); ++i) {
      if (static_cast<int>(i) == skip) continue;
      const HalfSpace& h = X.faces[i].plane;
      Scalar sp = h.side(p), sq = h.side(q);
      Scalar den = sq - sp;  // side(t) = sp + t * den <= 0
      if (sign(den) == 0) {
        if (sign(sp) > 0) return false;
        continue;
      }
      Scalar t = -sp / den;
      if (sign(den) > 0) {
        if (t < hi) hi = t;
      } else if (t > lo) {
        lo = t;
      }
      if (lo > hi) return false;
    }
    return true;
  };
  if (!apply(P, skip_a)) return std::nullopt;
  if (Q && !apply(*Q, skip_b)) return std::nullopt;
  return std::make_pair(lo, hi);
}

struct Dsu {
  std::vector<int> p;
  int make() {
    p.push_back(static_cast<int>(p.size()));
    return p.back();
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

inline bool point_less(const Point3& a, const Point3& b) { return lex_less(a, b); }

// Line of two face planes: a point and a direction.
inline std::optional<std::pair<Point3, Point3>> plane_line(const HalfSpace& f, const HalfSpace& g) {
  Point3 d = cross(f.normal(), g.normal());
  if (sign(d.x) == 0 && sign(d.y) == 0 && sign(d.z) == 0) return std::nullopt;
  // Point on both planes closest to the origin in the span of the normals.
  Point3 n1 = f.normal(), n2 = g.normal();
  Scalar a = dot(n1, n1), b = dot(n1, n2), c = dot(n2, n2);
  Scalar det = a * c - b * b;
  Scalar u = (f.d * c - g.d * b) / det, v = (g.d * a - f.d * b) / det;
  return std::make_pair(n1 * u + n2 * v, d);
}

}  // namespace detail

/// Exact counts for the arrangement of the polytope boundaries, assuming
/// boundaries of distinct polytopes meet transversally.
inline OverlayStats overlay_stats(const std::vector<Polyhedron>& S) {
  OverlayStats st;
  st.m = S.size();
  const std::size_t m = S.size();
  for (const auto& P : S) {
    st.n += P.complexity();
    st.v1 += P.vertex_count();
  }
  std::vector<Box> bb;
  for (const auto& P : S) bb.push_back(P.bounds());

  // Points on each face (for the face-by-face Euler count) and edge pieces.
  struct FaceGraph {
    std::vector<std::pair<Point3, Point3>> segs;  // full segments on the face
    std::vector<Point3> pts;                      // all arrangement vertices on the face
  };
  std::vector<std::vector<FaceGraph>> fg(m);
  for (std::size_t i = 0; i < m; ++i) fg[i].resize(S[i].faces.size());

  // Original edges, cut by other boundaries.
  for (std::size_t i = 0; i < m; ++i) {
    const auto& P = S[i];
    for (auto [a, b] : P.edges()) {
      const Point3& p = P.vertices[a];
      const Point3& q = P.vertices[b];
      std::vector<Point3> cuts;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i || !boxes_overlap(bb[i], bb[j])) continue;
        auto r = detail::clip_segment(p, q, S[j]);
        if (!r) continue;
        for (const Scalar& t : {r->first, r->second})
          if (sign(t) > 0 && t < 1) cuts.push_back(p + (q - p) * t);
      }
      std::sort(cuts.begin(), cuts.end(), detail::point_less);
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      st.v2 += cuts.size();
      st.edges += cuts.size() + 1;
      // Register on the two faces sharing this edge.
      for (std::size_t f = 0; f < P.faces.size(); ++f) {
        const auto& cyc = P.faces[f].cycle;
        for (std::size_t e = 0; e < cyc.size(); ++e) {
          int u = cyc[e], w = cyc[(e + 1) % cyc.size()];
          if ((u == a && w == b) || (u == b && w == a)) {
            fg[i][f].segs.push_back({p, q});
            fg[i][f].pts.push_back(p);
            fg[i][f].pts.push_back(q);
            for (const auto& c : cuts) fg[i][f].pts.push_back(c);
          }
        }
      }
    }
  }

  // Face-face intersection segments and triple points.
  std::set<std::vector<Scalar>> triples;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!boxes_overlap(bb[i], bb[j])) continue;
      for (std::size_t f = 0; f < S[i].faces.size(); ++f)
        for (std::size_t g = 0; g < S[j].faces.size(); ++g) {
          auto line = detail::plane_line(S[i].faces[f].plane, S[j].faces[g].plane);
          if (!line) continue;
          // A long enough chord of the line through both polytopes' bounds.
          Scalar span = 0;
          for (const Box* b : {&bb[i], &bb[j]}) {
            span += abs(b->xmax - b->xmin) + abs(b->ymax - b->ymin) + abs(b->zmax - b->zmin);
            span += abs(b->xmax) + abs(b->xmin) + abs(b->ymax) + abs(b->ymin) + abs(b->zmax) + abs(b->zmin);
          }
          Point3 d = line->second;
          Scalar dn = abs(d.x) + abs(d.y) + abs(d.z);
          Point3 p = line->first - d * (span / dn), q = line->first + d * (span / dn);
          auto r = detail::clip_segment(p, q, S[i], static_cast<int>(f), static_cast<int>(g), &S[j]);
          if (!r || !(r->first < r->second)) continue;
          Point3 a = p + (q - p) * r->first, b = p + (q - p) * r->second;
          std::vector<Point3> cuts;
          for (std::size_t k = 0; k < m; ++k) {
            if (k == i || k == j) continue;
            auto rk = detail::clip_segment(a, b, S[k]);
            if (!rk) continue;
            for (const Scalar& t : {rk->first, rk->second})
              if (sign(t) > 0 && t < 1) {
                Point3 c = a + (b - a) * t;
                cuts.push_back(c);
                triples.insert({c.x, c.y, c.z});
              }
          }
          std::sort(cuts.begin(), cuts.end(), detail::point_less);
          cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
          st.edges += cuts.size() + 1;
          for (auto [pi, fi] : {std::pair<std::size_t, std::size_t>{i, f}, {j, g}}) {
            fg[pi][fi].segs.push_back({a, b});
            fg[pi][fi].pts.push_back(a);
            fg[pi][fi].pts.push_back(b);
            for (const auto& c : cuts) fg[pi][fi].pts.push_back(c);
          }
        }
    }
  st.v3 = triples.size();
  st.vertices = st.v1 + st.v2 + st.v3;

  // Faces: on every original face, bounded faces = E - V + C of its planar graph.
  for (std::size_t i = 0; i < m; ++i)
    for (auto& g : fg[i]) {
      auto& pts = g.pts;
      std::sort(pts.begin(), pts.end(), detail::point_less);
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      auto id = [&](const Point3& p) {
        return static_cast<int>(std::lower_bound(pts.begin(), pts.end(), p, detail::point_less) - pts.begin());
      };
      detail::Dsu dsu;
      for (std::size_t k = 0; k < pts.size(); ++k) dsu.make();
      long E = 0;
      for (const auto& [a, b] : g.segs) {
        // Points of the face lying on segment ab, in order.
        std::vector<int> on;
        Point3 d = b - a;
        for (std::size_t k = 0; k < pts.size(); ++k) {
          Point3 w = pts[k] - a;
          Point3 c = cross(d, w);
          if (sign(c.x) || sign(c.y) || sign(c.z)) continue;
          Scalar t = dot(w, d);
          if (sign(t) < 0 || t > dot(d, d)) continue;
          on.push_back(static_cast<int>(k));
        }
        E += static_cast<long>(on.size()) - 1;
        for (int k : on) dsu.unite(k, id(a));
      }
      long V = static_cast<long>(pts.size());
      long C = 0;
      for (std::size_t k = 0; k < pts.size(); ++k) C += dsu.find(static_cast<int>(k)) == static_cast<int>(k);
      st.faces += static_cast<std::size_t>(E - V + C);
    }
  return st;
}

}  // namespace leis
