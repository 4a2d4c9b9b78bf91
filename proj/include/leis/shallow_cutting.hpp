#pragma once
// k-shallow cuttings: a triangulated surface above the k-level whose
// triangles carry the planes crossing their downward prisms.
//
// The surface is the upper convex hull of a point set W on a lifted level
// k' >= k. W starts with the k'-level points above the box corners; while some
// hull triangle dips below the k-level we add the k'-level vertex that rises
// highest above that triangle's plane. Every corner lies on the k'-level, so
// each conflict list is the union of three corner lists.

#include <leis/terrain.hpp>

#include <memory>
#include <numeric>
#include <sstream>

namespace leis {

struct ShallowCutting {
  std::size_t k = 0;
  Scalar alpha;  // max conflict list size / max(k, 1); bounds the level of every surface point
  Terrain surface;
  std::vector<std::vector<int>> conflicts;  // plane ids, sorted, per triangle

  std::size_t size() const { return surface.triangles.size(); }
  bool trivial() const { return surface.is_infinite() && !surface.triangles[0].has_plane; }

  /// Triangle vertically above q (closed), or nullopt when q is above the surface.
  std::optional<int> locate_prism(const Point3& q, std::size_t* steps = nullptr) const {
    int t = surface.locate(q.xy(), steps);
    if (t < 0) throw std::logic_error("locate_prism: point location failed");
    if (surface.triangles[t].above(q)) return t;
    return std::nullopt;
  }
};

namespace detail {

/// f(x, y) = a x + b y + c, the difference of two planes.
struct Lin {
  Scalar a, b, c;
  Scalar operator()(const Point2& p) const { return a * p.x + b * p.y + c; }
};

inline Lin diff(const Plane& h, const Plane& g) { return {h.a - g.a, h.b - g.b, h.c - g.c}; }

inline std::vector<int> planes_below(const Point3& p, const std::vector<Plane>& H) {
  std::vector<int> out;
  for (std::size_t i = 0; i < H.size(); ++i)
    if (H[i].eval(p) <= p.z) out.push_back(static_cast<int>(i));
  return out;
}

/// Index of the plane at rank k (0-based) at p, ties broken by smaller id.
inline std::vector<int> rank_order(const Point2& p, const std::vector<Plane>& H) {
  std::vector<Scalar> v(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) v[i] = H[i].eval(p);
  std::vector<int> ord(H.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int i, int j) {
    if (v[i] != v[j]) return v[i] < v[j];
    return H[i].id < H[j].id;
  });
  return ord;
}

inline Scalar k_level_height(const Point2& p, const std::vector<Plane>& H, std::size_t k) {
  std::vector<Scalar> v;
  v.reserve(H.size());
  for (const auto& h : H) v.push_back(h.eval(p));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(k), v.end());
  return v[k];
}

class CuttingBuilder {
 public:
  CuttingBuilder(const std::vector<Plane>& H, std::size_t k, const Box& box, std::size_t lift_level)
      : H_(H), k_(k), lift_(lift_level), box_(box) {}

  ShallowCutting run() {
    Box b = fit_z(box_, H_);
    std::vector<Point3> init;
    for (const auto& c : b.corners_xy()) init.push_back({c.x, c.y, b.zmin - 1});
    for (const auto& c : b.corners_xy()) init.push_back({c.x, c.y, k_level_height(c, H_, lift_)});
    hull_ = std::make_unique<IncrementalHull>(init);
    below_.resize(init.size());
    for (std::size_t i = 4; i < init.size(); ++i) below_[i] = planes_below(init[i], H_);

    std::vector<int> work;
    for (int t = 0; t < static_cast<int>(hull_->tris.size()); ++t) work.push_back(t);
    while (!work.empty()) {
      int t = work.back();
      work.pop_back();
      const auto& tri = hull_->tris[t];
      if (!tri.alive || sign(tri.h.nz) <= 0) continue;
      auto w = find_violation(t);
      if (!w) continue;
      Point3 v = ascend(*w, plane_of(t));
      auto created = hull_->insert(v, t);
      if (created.empty()) throw std::logic_error("shallow cutting: ascent point not above hull");
      below_.push_back(planes_below(v, H_));
      work.insert(work.end(), created.begin(), created.end());
    }

    ShallowCutting C;
    C.k = k_;
    std::vector<Triangle> tris;
    std::size_t worst = 0;
    for (const auto& tri : hull_->tris) {
      if (!tri.alive || sign(tri.h.nz) <= 0) continue;
      const auto& P = hull_->points;
      Triangle T{{P[tri.v[0]], P[tri.v[1]], P[tri.v[2]]}, false, true,
                 plane_through(P[tri.v[0]], P[tri.v[1]], P[tri.v[2]])};
      std::vector<int> ids;
      for (int c : tri.v)
        for (int i : below_[c]) ids.push_back(H_[i].id);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      worst = std::max(worst, ids.size());
      tris.push_back(T);
      C.conflicts.push_back(std::move(ids));
    }
    C.surface = Terrain(b, std::move(tris));
    C.alpha = ratio(static_cast<long>(worst), static_cast<long>(std::max<std::size_t>(k_, 1)));
    return C;
  }

  std::size_t points_added() const { return hull_->points.size() - 8; }

 private:
  Plane plane_of(int t) const {
    const auto& P = hull_->points;
    const auto& v = hull_->tris[t].v;
    return plane_through(P[v[0]], P[v[1]], P[v[2]]);
  }

  // A point of the triangle's xy-projection where fewer than k + 1 planes
  // lie on or below the triangle, if any.
  std::optional<Point2> find_violation(int t) {
    const auto& tri = hull_->tris[t];
    const auto& P = hull_->points;
    Plane g = plane_of(t);
    std::vector<int> cand;
    for (int c : tri.v) cand.insert(cand.end(), below_[c].begin(), below_[c].end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<Lin> f;
    for (int i : cand) f.push_back(diff(H_[i], g));
    std::array<Point2, 3> corners{P[tri.v[0]].xy(), P[tri.v[1]].xy(), P[tri.v[2]].xy()};
    if (sign(orient2d(corners[0], corners[1], corners[2])) < 0) std::swap(corners[1], corners[2]);
    return region(corners, f, 0, 0);
  }

  std::optional<Point2> region(const std::array<Point2, 3>& T, const std::vector<Lin>& f, std::size_t base,
                               int depth) {
    std::vector<Lin> mixed;
    for (const auto& l : f) {
      int le = 0;
      for (const auto& c : T) le += sign(l(c)) <= 0;
      if (le == 3) ++base;
      else if (le > 0) mixed.push_back(l);
    }
    if (base >= k_ + 1) return std::nullopt;
    std::size_t need = k_ + 1 - base;
    if (mixed.size() < need) return Point2{(T[0].x + T[1].x + T[2].x) / 3, (T[0].y + T[1].y + T[2].y) / 3};
    if (mixed.size() > 24 && depth < 10) {
      Point2 m01{(T[0].x + T[1].x) / 2, (T[0].y + T[1].y) / 2};
      Point2 m12{(T[1].x + T[2].x) / 2, (T[1].y + T[2].y) / 2};
      Point2 m20{(T[2].x + T[0].x) / 2, (T[2].y + T[0].y) / 2};
      for (const auto& sub : {std::array<Point2, 3>{T[0], m01, m20}, std::array<Point2, 3>{m01, T[1], m12},
                              std::array<Point2, 3>{m20, m12, T[2]}, std::array<Point2, 3>{m01, m12, m20}}) {
        if (auto w = region(sub, mixed, base, depth + 1)) return w;
      }
      return std::nullopt;
    }
    return sweep(T, mixed, base);
  }

  // Visits both sides of every piece of every line inside T. Each open cell of
  // the arrangement restricted to T borders one of these pieces. Counts are
  // updated incrementally while walking along a line.
  std::optional<Point2> sweep(const std::array<Point2, 3>& T, const std::vector<Lin>& f, std::size_t base) {
    std::array<Lin, 3> edge;  // inward: >= 0 inside
    for (int e = 0; e < 3; ++e) {
      const Point2& p = T[e];
      const Point2& q = T[(e + 1) % 3];
      edge[e] = {-(q.y - p.y), q.x - p.x, (q.y - p.y) * p.x - (q.x - p.x) * p.y};
    }
    const std::size_t m = f.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Lin& L = f[i];
      Point2 dir{-L.b, L.a};
      Point2 o = sign(L.a) != 0 ? Point2{-L.c / L.a, 0} : Point2{0, -L.c / L.b};
      auto at = [&](const Scalar& s) { return Point2{o.x + dir.x * s, o.y + dir.y * s}; };
      std::optional<Scalar> lo, hi;
      bool empty = false;
      for (const auto& E : edge) {
        Scalar den = E.a * dir.x + E.b * dir.y;
        Scalar val = E(o);
        if (sign(den) == 0) {
          if (sign(val) < 0) empty = true;
          continue;
        }
        Scalar s = -val / den;
        if (sign(den) > 0) {
          if (!lo || s > *lo) lo = s;
        } else if (!hi || s < *hi) {
          hi = s;
        }
      }
      if (empty || !lo || !hi || *lo >= *hi) continue;
      // Crossings strictly inside the piece, with the crossing line.
      std::vector<std::pair<Scalar, std::size_t>> cuts;
      std::vector<char> parallel(m, 0);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        Scalar den = f[j].a * dir.x + f[j].b * dir.y;
        if (sign(den) == 0) {
          parallel[j] = 1;
          continue;
        }
        Scalar s = -f[j](o) / den;
        if (s > *lo && s < *hi) cuts.push_back({std::move(s), j});
      }
      std::sort(cuts.begin(), cuts.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
      std::vector<Scalar> stops{*lo};
      for (const auto& c : cuts)
        if (c.first != stops.back()) stops.push_back(c.first);
      stops.push_back(*hi);
      // Signs at the first piece's midpoint.
      Point2 m0 = at((stops[0] + stops[1]) / 2);
      std::vector<int> sg(m, 0);
      std::size_t counted = 0;  // lines other than i, excluding coincident ones
      std::vector<std::size_t> coincident;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        sg[j] = sign(f[j](m0));
        if (sg[j] == 0) coincident.push_back(j);
        else counted += sg[j] < 0;
      }
      std::size_t next_cut = 0;
      Point2 n{L.a, L.b};
      for (std::size_t c = 0; c + 1 < stops.size(); ++c) {
        if (c > 0) {
          while (next_cut < cuts.size() && cuts[next_cut].first == stops[c]) {
            std::size_t j = cuts[next_cut++].second;
            counted -= sg[j] < 0;
            sg[j] = -sg[j];
            counted += sg[j] < 0;
          }
        }
        Point2 mid = at((stops[c] + stops[c + 1]) / 2);
        for (int side : {1, -1}) {
          Point2 nn{n.x * side, n.y * side};
          auto perturbed = [&](const Lin& M) {
            int s = sign(M(mid));
            if (s == 0) s = sign(M.a * nn.x + M.b * nn.y);
            return s;
          };
          bool inside = true;
          for (const auto& E : edge) inside &= perturbed(E) >= 0;
          if (!inside) continue;
          std::size_t cnt = base + counted + (side < 0 ? 1 : 0);
          for (std::size_t j : coincident) cnt += perturbed(f[j]) < 0;
          if (cnt >= k_ + 1) continue;
          std::vector<Point2> poly{T[0], T[1], T[2]};
          for (std::size_t j = 0; j < m && !poly.empty(); ++j) {
            if (perturbed(f[j]) < 0) poly = clip_polygon(poly, f[j].a, f[j].b, f[j].c);
            else poly = clip_polygon(poly, -f[j].a, -f[j].b, -f[j].c);
          }
          if (!poly.empty()) return vertex_centroid(poly);
        }
      }
    }
    return std::nullopt;
  }

  // The vertex of the lifted level's cell containing w that rises highest above g.
  Point3 ascend(const Point2& w, const Plane& g) const {
    auto ord = rank_order(w, H_);
    const Plane& h = H_[ord[lift_]];
    std::vector<Point2> poly = box_polygon(box_);
    for (std::size_t r = 0; r < ord.size() && !poly.empty(); ++r) {
      if (r == lift_) continue;
      const Plane& j = H_[ord[r]];
      if (r < lift_) poly = clip_polygon(poly, j.a - h.a, j.b - h.b, j.c - h.c);
      else poly = clip_polygon(poly, h.a - j.a, h.b - j.b, h.c - j.c);
    }
    Point2 best = w;
    if (!poly.empty()) {
      Lin gap = diff(h, g);
      best = poly[0];
      for (const auto& p : poly) {
        Scalar d = gap(p) - gap(best);
        if (sign(d) > 0 || (sign(d) == 0 && lex_less(p, best))) best = p;
      }
    }
    return {best.x, best.y, h.eval(best)};
  }

  const std::vector<Plane>& H_;
  std::size_t k_;
  std::size_t lift_;  // level the surface is raised to
  Box box_;
  std::unique_ptr<IncrementalHull> hull_;
  std::vector<std::vector<int>> below_;  // per hull point: plane indices on or below it
};

}  // namespace detail

inline ShallowCutting trivial_cutting(const std::vector<Plane>& H, std::size_t k, const Box& box) {
  ShallowCutting C;
  C.k = k;
  C.surface = Terrain(box, {Triangle::at_infinity()});
  std::vector<int> ids;
  for (const auto& h : H) ids.push_back(h.id);
  std::sort(ids.begin(), ids.end());
  C.conflicts = {ids};
  C.alpha = ratio(static_cast<long>(H.size()), static_cast<long>(std::max<std::size_t>(k, 1)));
  return C;
}

/// Planes crossing the downward prism of a triangle: those on or below one of
/// its corners (or anywhere on the box, for an infinite triangle).
inline std::vector<int> prism_conflicts(const Triangle& t, const std::vector<Plane>& H, const Box& box) {
  std::vector<int> ids;
  for (const auto& h : H) {
    bool hit = false;
    if (!t.has_plane) hit = true;
    else if (t.infinite) {
      for (const auto& c : box.corners_xy()) hit |= h.eval(c) <= t.plane.eval(c);
    } else {
      for (const auto& c : t.p) hit |= h.eval(c) <= c.z;
    }
    if (hit) ids.push_back(h.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct CuttingOptions {
  /// Corners are placed on the floor(lift * k)-level; a larger lift gives fewer,
  /// larger triangles with longer conflict lists.
  Scalar lift = 2;
};

/// Builds a k-shallow cutting of H over the box's xy-extent.
inline ShallowCutting build_shallow_cutting(const std::vector<Plane>& H, std::size_t k, const Box& box,
                                            const CuttingOptions& opt = {}) {
  if (H.empty()) throw std::invalid_argument("build_shallow_cutting: empty plane set");
  if (k >= H.size()) return trivial_cutting(H, k, box);
  if (k == 0) {
    ShallowCutting C;
    C.k = 0;
    C.surface = lower_envelope(H, box);
    std::size_t worst = 0;
    for (const auto& t : C.surface.triangles) {
      C.conflicts.push_back(prism_conflicts(t, H, box));
      worst = std::max(worst, C.conflicts.back().size());
    }
    C.alpha = static_cast<long>(worst);
    return C;
  }
  mpz_class lifted = mpz_class(opt.lift * static_cast<long>(k));
  std::size_t level = std::min<std::size_t>(H.size() - 1, std::max<std::size_t>(k, lifted.get_ui()));
  return detail::CuttingBuilder(H, k, box, level).run();
}

/// Highest level attained on a finite triangle, counting only `ids` (the
/// planes that can pass below it). The maximum of a closed count is reached at
/// a vertex of the arrangement of the traces of these planes.
inline std::size_t max_level_on_triangle(const Triangle& t, const std::vector<Plane>& planes) {
  std::vector<detail::Lin> f;
  for (const auto& h : planes) f.push_back(detail::diff(h, t.plane));
  std::vector<detail::Lin> bound;
  std::array<Point2, 3> T{t.p[0].xy(), t.p[1].xy(), t.p[2].xy()};
  if (sign(orient2d(T[0], T[1], T[2])) < 0) std::swap(T[1], T[2]);
  for (int e = 0; e < 3; ++e) {
    const Point2& p = T[e];
    const Point2& q = T[(e + 1) % 3];
    bound.push_back({-(q.y - p.y), q.x - p.x, (q.y - p.y) * p.x - (q.x - p.x) * p.y});
  }
  std::vector<Point2> cand(T.begin(), T.end());
  auto meet = [&](const detail::Lin& u, const detail::Lin& v) {
    Scalar det = u.a * v.b - u.b * v.a;
    if (sign(det) == 0) return;
    Point2 p{(u.b * v.c - v.b * u.c) / det, (v.a * u.c - u.a * v.c) / det};
    for (const auto& E : bound)
      if (sign(E(p)) < 0) return;
    cand.push_back(p);
  };
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) meet(f[i], f[j]);
    for (const auto& E : bound) meet(f[i], E);
  }
  std::size_t best = 0;
  for (const auto& p : cand) {
    std::size_t c = 0;
    for (const auto& l : f) c += sign(l(p)) <= 0;
    best = std::max(best, c);
  }
  return best;
}

struct CuttingReport {
  bool pass = true;
  /// Achieved alpha: the highest level on the surface over max(k, 1). Exact for
  /// triangles with at most 64 conflicts; the list size bounds it otherwise.
  Scalar alpha;
  Scalar list_alpha;  // max conflict list size / max(k, 1)
  std::size_t size = 0;
  std::size_t max_corner_level = 0;
  std::vector<std::string> failures;

  void fail(const std::string& s) {
    pass = false;
    failures.push_back(s);
  }
};

/// Oracle checks (a) corner levels, (b) the surface is above the k-level,
/// (c) conflict lists are exactly the prism conflicts and cover sampled points.
inline CuttingReport verify_cutting(const ShallowCutting& C, const std::vector<Plane>& H, std::size_t k,
                                    const Box& box, int grid = 24) {
  CuttingReport R;
  R.size = C.size();
  const std::size_t kk = std::max<std::size_t>(k, 1);
  std::size_t worst = 0;
  for (const auto& l : C.conflicts) worst = std::max(worst, l.size());
  R.list_alpha = ratio(static_cast<long>(worst), static_cast<long>(kk));
  std::size_t top = 0;
  for (std::size_t t = 0; t < C.surface.triangles.size() && t < C.conflicts.size(); ++t) {
    const Triangle& T = C.surface.triangles[t];
    if (T.infinite || C.conflicts[t].size() > 64) {
      top = std::max(top, C.conflicts[t].size());
      continue;
    }
    std::vector<Plane> mine;
    for (const auto& h : H)
      if (std::binary_search(C.conflicts[t].begin(), C.conflicts[t].end(), h.id)) mine.push_back(h);
    top = std::max(top, max_level_on_triangle(T, mine));
  }
  R.alpha = ratio(static_cast<long>(top), static_cast<long>(kk));
  if (C.conflicts.size() != C.surface.triangles.size()) R.fail("(c) conflict list count mismatch");

  for (std::size_t t = 0; t < C.surface.triangles.size(); ++t) {
    const Triangle& T = C.surface.triangles[t];
    if (!T.infinite) {
      for (const auto& c : T.p) {
        std::size_t lv = level_of(c, H);
        R.max_corner_level = std::max(R.max_corner_level, lv);
        if (Scalar(static_cast<long>(lv)) > R.alpha * static_cast<long>(kk))
          R.fail("(a) corner level " + std::to_string(lv) + " exceeds alpha*k at triangle " + std::to_string(t));
      }
    }
    if (t < C.conflicts.size() && prism_conflicts(T, H, box) != C.conflicts[t])
      R.fail("(c) conflict list of triangle " + std::to_string(t) + " differs from prism recomputation");
  }

  auto surface_height = [&](const Point2& p) { return C.surface.height(p); };
  std::vector<Point2> probes;
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j)
      probes.push_back({box.xmin + (box.xmax - box.xmin) * ratio(i, grid),
                        box.ymin + (box.ymax - box.ymin) * ratio(j, grid)});
  if (k < H.size()) {
    for (const auto& p : probes) {
      auto s = surface_height(p);
      Scalar lk = detail::k_level_height(p, H, k);
      if (s && lk > *s) {
        std::ostringstream os;
        os << "(b) k-level above the surface at (" << p.x << ", " << p.y << ")";
        R.fail(os.str());
        break;
      }
    }
    if (H.size() > 1) {
      Terrain env = lower_envelope(H, box);
      for (const auto& t : env.triangles)
        for (const auto& v : t.p) {
          if (level_of(v, H) > k) continue;
          auto s = surface_height(v.xy());
          if (s && !(v.z < *s)) {
            R.fail("(b) envelope vertex at level <= k not strictly below the surface");
            break;
          }
        }
    }
  }

  // Sampled containment: the top of each prism at its centroid.
  for (std::size_t t = 0; t < C.surface.triangles.size() && t < C.conflicts.size(); ++t) {
    const Triangle& T = C.surface.triangles[t];
    if (!T.has_plane) continue;
    Point2 c = T.infinite ? Point2{(box.xmin + box.xmax) / 2, (box.ymin + box.ymax) / 2} : T.centroid_xy();
    Point3 s{c.x, c.y, T.plane.eval(c)};
    for (int id : level_and_conflicts(s, H).conflicts)
      if (!std::binary_search(C.conflicts[t].begin(), C.conflicts[t].end(), id)) {
        R.fail("(c) conflict list of triangle " + std::to_string(t) + " misses plane " + std::to_string(id));
        break;
      }
  }
  return R;
}

}  // namespace leis
