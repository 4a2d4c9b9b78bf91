#pragma once
// Seeded random instances.

#include <leis/polyhedron.hpp>

#include <random>
#include <set>

namespace leis {

using Rng = std::mt19937_64;

/// Default domain for generated instances.
inline Box default_box() { return {-100, 100, -100, 100, -1000, 1000}; }

inline Scalar uniform_rational(Rng& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> d(lo * den, hi * den);
  return ratio(d(rng), den);
}

/// Random non-vertical planes with slopes in [-1, 1] and offsets in [-100, 100].
/// Rejects repeated slopes, so no two planes are parallel. Ids start at `first_id`.
inline std::vector<Plane> random_planes(Rng& rng, std::size_t n, int first_id = 0) {
  std::vector<Plane> H;
  std::set<std::pair<long, long>> slopes;
  std::uniform_int_distribution<long> s(-10000, 10000), c(-100000, 100000);
  int retries = 0;
  while (H.size() < n) {
    long a = s(rng), b = s(rng);
    if (!slopes.insert({a, b}).second) {
      if (++retries > 100) throw std::runtime_error("random_planes: retry budget exhausted");
      continue;
    }
    H.push_back({ratio(a, 10000), ratio(b, 10000), ratio(c(rng), 1000), first_id + static_cast<int>(H.size())});
  }
  return H;
}

inline Point3 random_point(Rng& rng, const Box& box, long den = 1000) {
  std::uniform_int_distribution<long> u(0, den);
  auto lerp = [&](const Scalar& lo, const Scalar& hi) -> Scalar { return lo + (hi - lo) * ratio(u(rng), den); };
  return {lerp(box.xmin, box.xmax), lerp(box.ymin, box.ymax), lerp(box.zmin, box.zmax)};
}

/// Query point near the k-level of H: above the k-level with probability about 1/2.
inline Point3 random_query_near_level(Rng& rng, const std::vector<Plane>& H, std::size_t k, const Box& box) {
  Point3 q = random_point(rng, box);
  if (H.empty()) return q;
  std::vector<Scalar> v;
  for (const auto& h : H) v.push_back(h.eval(q));
  std::sort(v.begin(), v.end());
  std::size_t lo = std::min(k, v.size() - 1);
  std::uniform_int_distribution<std::size_t> r(0, std::min(v.size() - 1, 2 * lo + 1));
  std::size_t i = r(rng);
  Scalar jitter = ratio(static_cast<long>(std::uniform_int_distribution<int>(-1000, 1000)(rng)), 1000);
  q.z = v[i] + jitter;
  return q;
}

/// Convex hull of `count` random points in a ball-ish cube around `center`.
inline Polyhedron random_polytope(Rng& rng, std::size_t count, const Point3& center, long radius,
                                  long den = 1000) {
  std::uniform_int_distribution<long> d(-radius * den, radius * den);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < count; ++i)
      pts.push_back({center.x + ratio(d(rng), den), center.y + ratio(d(rng), den), center.z + ratio(d(rng), den)});
    try {
      return convex_hull(pts);
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::runtime_error("random_polytope: retry budget exhausted");
}

}  // namespace leis
