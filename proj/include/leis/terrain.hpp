#pragma once
// Triangulated xy-monotone surfaces over a box: lower envelopes and the
// surfaces of shallow cuttings.

#include <leis/planar_locator.hpp>
#include <leis/polyhedron.hpp>

#include <optional>

namespace leis {

struct Triangle {
  std::array<Point3, 3> p;
  bool infinite = false;  // covers the whole domain
  bool has_plane = true;  // false only for the Z = +inf triangle
  Plane plane;            // supporting plane

  static Triangle at_infinity() { return {{}, true, false, {}}; }
  static Triangle covering(const Plane& h) { return {{}, true, true, h}; }

  Scalar height(const Point2& q) const { return plane.eval(q); }
  /// Closed test: q lies on or below this triangle's plane. Always true at infinity.
  bool above(const Point3& q) const { return !has_plane || q.z <= plane.eval(q); }
  Point2 centroid_xy() const {
    return {(p[0].x + p[1].x + p[2].x) / 3, (p[0].y + p[1].y + p[2].y) / 3};
  }
};

inline Plane plane_through(const Point3& a, const Point3& b, const Point3& c) {
  Point3 n = cross(b - a, c - a);
  if (sign(n.z) == 0) throw std::invalid_argument("plane_through: vertical plane");
  // n.x x + n.y y + n.z z = n . a
  return {-n.x / n.z, -n.y / n.z, dot(n, a) / n.z};
}

/// An xy-monotone triangulated surface over `box` (or a single infinite triangle).
class Terrain {
 public:
  Box box;
  std::vector<Triangle> triangles;

  Terrain() = default;
  Terrain(Box b, std::vector<Triangle> tris) : box(std::move(b)), triangles(std::move(tris)) { index(); }

  bool is_infinite() const { return triangles.size() == 1 && triangles[0].infinite; }

  /// Triangle whose xy-projection contains p.
  int locate(const Point2& p, std::size_t* steps = nullptr) const {
    if (is_infinite()) {
      if (steps) ++*steps;
      return 0;
    }
    if (!box.contains_xy(p)) throw std::out_of_range("query outside the domain box");
    return locator_.locate(p, steps);
  }

  std::optional<Scalar> height(const Point2& p) const {
    const Triangle& t = triangles[locate(p)];
    if (!t.has_plane) return std::nullopt;
    return t.height(p);
  }

 private:
  void index() {
    if (is_infinite()) return;
    std::vector<PlanarLocator::Tri2> t2;
    t2.reserve(triangles.size());
    for (const auto& t : triangles) t2.push_back({t.p[0].xy(), t.p[1].xy(), t.p[2].xy()});
    locator_ = PlanarLocator(t2);
  }
  PlanarLocator locator_;
};

/// z-extent of the planes over the box, padded.
inline Box fit_z(Box box, const std::vector<Plane>& H) {
  bool first = true;
  for (const auto& h : H)
    for (const auto& c : box.corners_xy()) {
      Scalar v = h.eval(c);
      if (first || v < box.zmin) box.zmin = v;
      if (first || v > box.zmax) box.zmax = v;
      first = false;
    }
  box.zmin -= 1;
  box.zmax += 1;
  return box;
}

/// Fan-triangulates the upper (non-vertical, upward-facing) faces of p.
inline std::vector<Triangle> upper_triangles(const Polyhedron& p, const std::vector<Plane>* planes = nullptr) {
  std::vector<Triangle> out;
  for (const auto& f : p.faces) {
    if (sign(f.plane.nz) <= 0) continue;
    if (f.artificial && planes) continue;
    Plane h;
    if (planes && f.tag >= 0) h = (*planes)[f.tag];
    else {
      h = {-f.plane.nx / f.plane.nz, -f.plane.ny / f.plane.nz, f.plane.d / f.plane.nz, f.tag};
    }
    for (std::size_t i = 1; i + 1 < f.cycle.size(); ++i) {
      Triangle t{{p.vertices[f.cycle[0]], p.vertices[f.cycle[i]], p.vertices[f.cycle[i + 1]]}, false, true, h};
      if (sign(orient2d(t.p[0].xy(), t.p[1].xy(), t.p[2].xy())) == 0) continue;
      out.push_back(t);
    }
  }
  return out;
}

/// The 0-level of H clipped to the box.
inline Terrain lower_envelope(const std::vector<Plane>& H, const Box& box) {
  if (H.empty()) throw std::invalid_argument("lower_envelope: empty plane set");
  if (H.size() == 1) return Terrain(box, {Triangle::covering(H[0])});
  Box b = fit_z(box, H);
  Polyhedron p = Polyhedron::from_box(b);
  for (std::size_t i = 0; i < H.size(); ++i) {
    p = p.clipped(HalfSpace::below(H[i]), false, static_cast<int>(i));
    if (p.empty()) throw std::logic_error("lower_envelope: empty clip");
  }
  return Terrain(b, upper_triangles(p, &H));
}

}  // namespace leis
