#pragma once
// Slab-based point location over a triangulated planar subdivision.

#include <leis/geometry.hpp>

#include <array>

namespace leis {

class PlanarLocator {
 public:
  using Tri2 = std::array<Point2, 3>;

  PlanarLocator() = default;

  explicit PlanarLocator(const std::vector<Tri2>& tris) {
    for (const auto& t : tris)
      for (const auto& p : t) xs_.push_back(p.x);
    std::sort(xs_.begin(), xs_.end());
    xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
    if (xs_.size() < 2) return;
    slabs_.resize(xs_.size() - 1);
    for (std::size_t t = 0; t < tris.size(); ++t) {
      Tri2 tri = tris[t];
      if (sign(orient2d(tri[0], tri[1], tri[2])) == 0) continue;
      if (sign(orient2d(tri[0], tri[1], tri[2])) < 0) std::swap(tri[1], tri[2]);
      Scalar lo = min(tri[0].x, min(tri[1].x, tri[2].x));
      Scalar hi = max(tri[0].x, max(tri[1].x, tri[2].x));
      auto a = std::lower_bound(xs_.begin(), xs_.end(), lo) - xs_.begin();
      auto b = std::lower_bound(xs_.begin(), xs_.end(), hi) - xs_.begin();
      for (auto s = a; s < b; ++s) {
        Scalar mid = (xs_[s] + xs_[s + 1]) / 2;
        // Lower boundary inside the slab: an edge traversed left to right (CCW order).
        for (int e = 0; e < 3; ++e) {
          const Point2& p = tri[e];
          const Point2& q = tri[(e + 1) % 3];
          if (p.x < q.x && p.x <= mid && mid <= q.x) {
            slabs_[s].push_back({static_cast<int>(t), p, q, Scalar(0)});
            slabs_[s].back().key = y_at(p, q, mid);
            break;
          }
        }
      }
    }
    for (auto& sl : slabs_)
      std::sort(sl.begin(), sl.end(), [](const Piece& u, const Piece& v) { return u.key < v.key; });
  }

  /// Face containing p, or -1 outside the subdivision. Points on a shared
  /// boundary go to the face to the right, then to the face above.
  int locate(const Point2& p, std::size_t* steps = nullptr) const {
    std::size_t st = 0;
    if (slabs_.empty() || p.x < xs_.front() || p.x > xs_.back()) return -1;
    std::size_t lo = 0, hi = slabs_.size() - 1;
    while (lo < hi) {
      ++st;
      std::size_t mid = (lo + hi + 1) / 2;
      if (xs_[mid] <= p.x) lo = mid;
      else hi = mid - 1;
    }
    const auto& sl = slabs_[lo];
    int ans = -1;
    std::size_t a = 0, b = sl.size();
    while (a < b) {
      ++st;
      std::size_t m = (a + b) / 2;
      if (y_at(sl[m].p, sl[m].q, p.x) <= p.y) {
        ans = static_cast<int>(m);
        a = m + 1;
      } else {
        b = m;
      }
    }
    if (steps) *steps += st + 1;
    if (ans < 0) return -1;
    // Above the topmost face's upper edge means outside.
    return sl[ans].tri;
  }

  std::size_t slab_count() const { return slabs_.size(); }

 private:
  struct Piece {
    int tri;
    Point2 p, q;
    Scalar key;
  };
  static Scalar y_at(const Point2& p, const Point2& q, const Scalar& x) {
    return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
  }
  std::vector<Scalar> xs_;
  std::vector<std::vector<Piece>> slabs_;
};

}  // namespace leis
