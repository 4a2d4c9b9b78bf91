#pragma once
// Exact-arithmetic primitives: points, non-vertical planes, halfspaces,
// levels and conflict lists, duality and the paraboloid lift.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace leis {

using Scalar = mpq_class;

inline int sign(const Scalar& s) { return sgn(s); }
inline Scalar min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline Scalar max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }
/// Canonical n / d.
inline Scalar ratio(long n, long d) {
  Scalar r(n, d);
  r.canonicalize();
  return r;
}

struct Point2 {
  Scalar x, y;
  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
};

struct Point3 {
  Scalar x, y, z;
  Point2 xy() const { return {x, y}; }
  friend bool operator==(const Point3& a, const Point3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

// Lexicographic (x, y[, z]) order; used wherever a deterministic tie-break is needed.
inline bool lex_less(const Point2& a, const Point2& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}
inline bool lex_less(const Point3& a, const Point3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

inline Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(const Point3& a, const Scalar& s) { return {a.x * s, a.y * s, a.z * s}; }
inline Scalar dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Twice the signed area of (a, b, c); positive when counter-clockwise.
inline Scalar orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// The graph z = a*x + b*y + c. Vertical planes are not representable.
struct Plane {
  Scalar a, b, c;
  int id = -1;

  Scalar eval(const Scalar& x, const Scalar& y) const { return a * x + b * y + c; }
  Scalar eval(const Point2& p) const { return eval(p.x, p.y); }
  Scalar eval(const Point3& p) const { return eval(p.x, p.y); }
  bool same_graph(const Plane& o) const { return a == o.a && b == o.b && c == o.c; }
};

inline Scalar eval_plane(const Plane& h, const Scalar& x, const Scalar& y) { return h.eval(x, y); }

/// Closed halfspace { p : n . p <= d }; n need not be normalised.
struct HalfSpace {
  Scalar nx, ny, nz, d;

  Scalar side(const Point3& p) const { return nx * p.x + ny * p.y + nz * p.z - d; }
  Point3 normal() const { return {nx, ny, nz}; }

  static HalfSpace below(const Plane& h) { return {-h.a, -h.b, Scalar(1), h.c}; }
  static HalfSpace above(const Plane& h) { return {h.a, h.b, Scalar(-1), -h.c}; }
  /// Supporting plane through three points, oriented so that `inside` is in the halfspace.
  static HalfSpace through(const Point3& p, const Point3& q, const Point3& r) {
    Point3 n = cross(q - p, r - p);
    return {n.x, n.y, n.z, dot(n, p)};
  }
  bool same_plane(const HalfSpace& o) const {
    // Parallel normals with the same orientation and offset.
    Point3 c = cross(normal(), o.normal());
    if (sign(c.x) != 0 || sign(c.y) != 0 || sign(c.z) != 0) return false;
    Scalar k;
    if (sign(o.nx) != 0) k = nx / o.nx;
    else if (sign(o.ny) != 0) k = ny / o.ny;
    else k = nz / o.nz;
    return sign(k) > 0 && d == k * o.d;
  }
};

/// Axis-parallel query domain. All structures clip to it; its faces are artificial.
struct Box {
  Scalar xmin, xmax, ymin, ymax, zmin, zmax;

  bool contains_xy(const Point2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  bool contains(const Point3& p) const { return contains_xy(p.xy()) && p.z >= zmin && p.z <= zmax; }
  std::vector<Point2> corners_xy() const {
    return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
  }
};

struct LevelResult {
  std::size_t level = 0;
  std::vector<int> conflicts;  // plane ids passing through or below q
};

/// Ground-truth oracle: planes passing through or below the downward ray from q.
inline LevelResult level_and_conflicts(const Point3& q, const std::vector<Plane>& planes) {
  LevelResult r;
  for (const Plane& h : planes) {
    if (h.eval(q) <= q.z) r.conflicts.push_back(h.id);
  }
  r.level = r.conflicts.size();
  return r;
}

inline std::size_t level_of(const Point3& q, const std::vector<Plane>& planes) {
  std::size_t n = 0;
  for (const Plane& h : planes) n += (h.eval(q) <= q.z);
  return n;
}

// Point (a, b, c) <-> plane z = a x + b y - c. An involution that reverses
// above/below incidence.
inline Plane dualize(const Point3& p, int id = -1) { return {p.x, p.y, -p.z, id}; }
inline Point3 dualize(const Plane& h) { return {h.a, h.b, -h.c}; }

/// Plane whose lower halfspace contains exactly the lifts (u, v, u^2 + v^2)
/// of the points of the disk.
inline Plane lift_circle(const Scalar& cx, const Scalar& cy, const Scalar& radius, int id = -1) {
  if (sign(radius) < 0) throw std::invalid_argument("lift_circle: negative radius");
  return {2 * cx, 2 * cy, radius * radius - cx * cx - cy * cy, id};
}

inline Point3 lift_point(const Scalar& u, const Scalar& v) { return {u, v, u * u + v * v}; }

/// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on malformed input.
inline Scalar parse_scalar(const std::string& s) {
  Scalar r;
  if (s.empty() || r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Scalar& s) { return s.get_str(); }

inline std::ostream& operator<<(std::ostream& os, const Point3& p) {
  return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
}

// Clip a convex polygon (counter-clockwise) to { a*x + b*y + c <= 0 }.
inline std::vector<Point2> clip_polygon(const std::vector<Point2>& poly, const Scalar& a,
                                        const Scalar& b, const Scalar& c) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  std::vector<Scalar> s(n);
  bool any_out = false, any_in = false;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = a * poly[i].x + b * poly[i].y + c;
    if (sign(s[i]) > 0) any_out = true;
    if (sign(s[i]) < 0) any_in = true;
  }
  if (!any_out) return poly;
  if (!any_in) {
    // Only boundary contact survives; callers treat it as empty.
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const int si = sign(s[i]), sj = sign(s[j]);
    if (si <= 0) out.push_back(poly[i]);
    if ((si < 0 && sj > 0) || (si > 0 && sj < 0)) {
      Scalar t = s[i] / (s[i] - s[j]);
      out.push_back({poly[i].x + (poly[j].x - poly[i].x) * t, poly[i].y + (poly[j].y - poly[i].y) * t});
    }
  }
  return out;
}

inline Scalar polygon_area2(const std::vector<Point2>& poly) {
  Scalar a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - p.y * q.x;
  }
  return a;
}

inline Point2 vertex_centroid(const std::vector<Point2>& poly) {
  Point2 c{0, 0};
  for (const auto& p : poly) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<long>(poly.size());
  c.y /= static_cast<long>(poly.size());
  return c;
}

inline std::vector<Point2> box_polygon(const Box& box) { return box.corners_xy(); }

}  // namespace leis
