#pragma once
// Halfspace max, weighted halfspace reporting and colored halfspace reporting
// on top of the LEIS index.
//
// Duality: the point p maps to the plane z = -p.x X - p.y Y + p.z, and the
// halfspace {z <= a x + b y + c} to the point (a, b, c). The point lies in the
// halfspace iff the dual point is on or above the dual plane, so the points in
// h are exactly the dual planes in Diamond(H, h*).

#include <leis/leis.hpp>

namespace leis {

struct LowerHalfspace {
  Scalar a, b, c;  // z <= a x + b y + c

  bool contains(const Point3& p) const { return p.z <= a * p.x + b * p.y + c; }
  Point3 dual() const { return {a, b, c}; }
};

inline Plane dual_plane(const Point3& p, int id) { return {-p.x, -p.y, p.z, id}; }

struct WeightedPoint {
  Point3 p;
  Scalar w;
  int id = -1;
};

/// Balanced tree over index ranges [lo, hi) of a sorted sequence. With `pad`
/// the leaf count is rounded up to a power of two, so every leaf has the same
/// depth; ranges past n are empty.
struct RangeTree {
  struct Node {
    std::size_t lo = 0, hi = 0;
    int left = -1, right = -1, parent = -1;
    std::size_t depth = 0;
  };
  std::vector<Node> nodes;
  std::size_t height = 0;

  std::size_t size = 0;

  explicit RangeTree(std::size_t n = 0, bool pad = false) : size(n) {
    std::size_t N = n;
    if (pad) N = std::size_t{1} << ceil_log2(n);
    if (N) make(0, N, -1, 0);
    for (auto& v : nodes) {
      v.lo = std::min(v.lo, n);
      v.hi = std::min(v.hi, n);
    }
  }
  bool leaf(int v) const { return nodes[v].left < 0; }

  /// Nodes whose ranges partition [lo, hi), left to right.
  std::vector<int> canonical(std::size_t lo, std::size_t hi) const {
    std::vector<int> out;
    if (lo < hi && !nodes.empty()) collect(0, lo, hi, out);
    return out;
  }
  /// The canonical nodes plus the ancestors needed to reach them from the root.
  std::vector<int> canonical_closure(const std::vector<int>& canon) const {
    std::vector<char> in(nodes.size(), 0);
    for (int v : canon)
      for (int u = v; u >= 0 && !in[u]; u = nodes[u].parent) in[u] = 1;
    std::vector<int> out;
    for (std::size_t v = 0; v < nodes.size(); ++v)
      if (in[v]) out.push_back(static_cast<int>(v));
    return out;
  }

 private:
  int make(std::size_t lo, std::size_t hi, int parent, std::size_t depth) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back({lo, hi, -1, -1, parent, depth});
    height = std::max(height, depth);
    if (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo + 1) / 2;
      int l = make(lo, mid, id, depth + 1);
      int r = make(mid, hi, id, depth + 1);
      nodes[id].left = l;
      nodes[id].right = r;
    }
    return id;
  }
  void collect(int v, std::size_t lo, std::size_t hi, std::vector<int>& out) const {
    const Node& n = nodes[v];
    if (hi <= n.lo || n.hi <= lo || n.lo == n.hi) return;
    if (lo <= n.lo && n.hi <= hi) {
      out.push_back(v);
      return;
    }
    collect(n.left, lo, hi, out);
    collect(n.right, lo, hi, out);
  }
};

/// Catalog whose vertices are the tree nodes, each holding the dual planes of its range.
inline CatalogGraph tree_catalog(const RangeTree& T, const std::vector<Plane>& sorted_planes) {
  CatalogGraph G;
  G.max_degree = 3;
  for (const auto& n : T.nodes)
    G.add_vertex(std::vector<Plane>(sorted_planes.begin() + static_cast<long>(n.lo),
                                    sorted_planes.begin() + static_cast<long>(n.hi)));
  for (std::size_t v = 0; v < T.nodes.size(); ++v)
    if (T.nodes[v].parent >= 0) G.add_edge(T.nodes[v].parent, static_cast<int>(v));
  return G;
}

struct WeightedPlaneTree {
  std::vector<WeightedPoint> points;  // weight order; equal weights by decreasing id
  RangeTree tree;
  LeisIndex max_index;     // k = 0
  LeisIndex report_index;  // k = ceil(log2(n)^2)
};

inline std::size_t report_k(std::size_t n) {
  double l = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  return static_cast<std::size_t>(std::ceil(l * l));
}

inline WeightedPlaneTree build_weighted_tree(std::vector<WeightedPoint> pts, const LeisConfig& base = {}) {
  if (pts.empty()) throw std::invalid_argument("build_weighted_tree: no points");
  std::sort(pts.begin(), pts.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
    if (a.w != b.w) return a.w < b.w;
    return a.id > b.id;
  });
  WeightedPlaneTree T;
  T.points = std::move(pts);
  T.tree = RangeTree(T.points.size(), true);
  std::vector<Plane> H;
  for (const auto& p : T.points) H.push_back(dual_plane(p.p, p.id));
  CatalogGraph G = tree_catalog(T.tree, H);
  LeisConfig c0 = base;
  c0.k = 0;
  T.max_index = build_leis(G, c0);
  LeisConfig ck = base;
  ck.k = report_k(T.points.size());
  if (ck.x && ck.x < ck.k) ck.x = ck.k;
  T.report_index = build_leis(G, ck);
  return T;
}

namespace detail {

/// Ids from the lists whose points lie in h.
inline std::vector<int> filter_lists(const VertexAnswer& a, const std::unordered_map<int, const Point3*>& where,
                                     const LowerHalfspace& h, std::size_t* scanned = nullptr) {
  std::vector<int> out;
  for (int id : a.merged()) {
    if (scanned) ++*scanned;
    if (h.contains(*where.at(id))) out.push_back(id);
  }
  return out;
}

inline std::unordered_map<int, const Point3*> point_map(const std::vector<WeightedPoint>& pts) {
  std::unordered_map<int, const Point3*> m;
  for (const auto& p : pts) m[p.id] = &p.p;
  return m;
}

}  // namespace detail

struct MaxResult {
  std::optional<int> id;
  std::size_t descent = 0;  // levels descended
  std::size_t walk_length = 0;
  SessionCounters counters;
};

/// Heaviest point in h; among equal weights the smallest id.
inline MaxResult query_max(const WeightedPlaneTree& T, const LowerHalfspace& h) {
  MaxResult r;
  const auto where = detail::point_map(T.points);
  const auto& idx = T.max_index;
  auto nonempty = [&](const VertexAnswer& a, int v) {
    if (a.above_k_level) return true;
    if (idx.graph.planes[v].empty()) return false;  // envelope at +inf
    return !detail::filter_lists(a, where, h).empty();
  };
  auto [s, a] = open_session(idx, h.dual(), 0);
  if (!nonempty(a, 0)) {
    r.walk_length = s.walk_length;
    r.counters = s.counters;
    return r;
  }
  int v = 0;
  while (!T.tree.leaf(v)) {
    const auto& n = T.tree.nodes[v];
    VertexAnswer b = advance_session(s, n.right);
    if (nonempty(b, n.right)) {
      v = n.right;
    } else {
      advance_session(s, v);
      advance_session(s, n.left);
      v = n.left;
    }
    ++r.descent;
  }
  r.id = T.points[T.tree.nodes[v].lo].id;
  r.walk_length = s.walk_length;
  r.counters = s.counters;
  return r;
}

struct ReportResult {
  std::vector<int> ids;  // sorted
  std::vector<int> canonical;
  std::size_t list_scanned = 0;      // conflict-list entries examined
  std::size_t fallback_scanned = 0;  // full-list entries examined at AboveKLevel nodes
  std::size_t walk_length = 0;
  SessionCounters counters;
};

/// Weight-order index range [lo, hi) of the points with weight in [w1, w2].
inline std::pair<std::size_t, std::size_t> weight_range(const WeightedPlaneTree& T, const Scalar& w1,
                                                        const Scalar& w2) {
  auto lo = std::lower_bound(T.points.begin(), T.points.end(), w1,
                             [](const WeightedPoint& p, const Scalar& w) { return p.w < w; });
  auto hi = std::upper_bound(T.points.begin(), T.points.end(), w2,
                             [](const Scalar& w, const WeightedPoint& p) { return w < p.w; });
  return {static_cast<std::size_t>(lo - T.points.begin()),
          static_cast<std::size_t>(std::max(lo, hi) - T.points.begin())};
}

inline ReportResult query_weighted_report(const WeightedPlaneTree& T, const LowerHalfspace& h, const Scalar& w1,
                                          const Scalar& w2) {
  if (w2 < w1) throw std::invalid_argument("query_weighted_report: w1 > w2");
  ReportResult r;
  auto [lo, hi] = weight_range(T, w1, w2);
  r.canonical = T.tree.canonical(lo, hi);
  if (r.canonical.empty()) return r;
  const auto where = detail::point_map(T.points);
  const auto& idx = T.report_index;
  std::vector<char> want(T.tree.nodes.size(), 0);
  for (int v : r.canonical) want[v] = 1;
  auto walk = walk_from_subgraph(idx.graph, T.tree.canonical_closure(r.canonical));
  std::optional<QuerySession> s;
  std::vector<char> done(T.tree.nodes.size(), 0);
  for (int v : walk) {
    VertexAnswer a;
    if (!s) {
      auto opened = open_session(idx, h.dual(), v);
      s = std::move(opened.first);
      a = std::move(opened.second);
    } else {
      a = advance_session(*s, v);
    }
    if (!want[v] || done[v]) continue;
    done[v] = 1;
    if (a.above_k_level) {
      for (const auto& pl : idx.graph.planes[v]) {
        ++r.fallback_scanned;
        if (h.contains(*where.at(pl.id))) r.ids.push_back(pl.id);
      }
    } else {
      auto got = detail::filter_lists(a, where, h, &r.list_scanned);
      r.ids.insert(r.ids.end(), got.begin(), got.end());
    }
  }
  std::sort(r.ids.begin(), r.ids.end());
  r.walk_length = s->walk_length;
  r.counters = s->counters;
  return r;
}

struct ColoredPoint {
  Point3 p;
  int color = 0;
  int id = -1;
};

enum class ColorVariant { Path, Tree };

struct ColoredCatalog {
  std::size_t m = 0;
  std::vector<ColoredPoint> points;
  std::vector<std::vector<Plane>> by_color;  // H_i
  LeisIndex path_index;                       // variant (i)
  RangeTree tree;                             // variant (ii), leaves are colors
  LeisIndex tree_index;
};

inline ColoredCatalog build_colored(std::vector<ColoredPoint> pts, std::size_t m, const LeisConfig& base = {}) {
  if (m == 0) throw std::invalid_argument("build_colored: no colors");
  ColoredCatalog C;
  C.m = m;
  C.points = std::move(pts);
  C.by_color.resize(m);
  for (const auto& p : C.points) {
    if (p.color < 0 || static_cast<std::size_t>(p.color) >= m) throw std::invalid_argument("build_colored: bad color");
    C.by_color[p.color].push_back(dual_plane(p.p, p.id));
  }
  LeisConfig cfg = base;
  cfg.k = 0;
  C.path_index = build_leis(CatalogGraph::path(C.by_color), cfg);
  C.tree = RangeTree(m);
  CatalogGraph G;
  G.max_degree = 3;
  for (const auto& n : C.tree.nodes) {
    std::vector<Plane> H;
    for (std::size_t c = n.lo; c < n.hi; ++c) H.insert(H.end(), C.by_color[c].begin(), C.by_color[c].end());
    G.add_vertex(std::move(H));
  }
  for (std::size_t v = 0; v < C.tree.nodes.size(); ++v)
    if (C.tree.nodes[v].parent >= 0) G.add_edge(C.tree.nodes[v].parent, static_cast<int>(v));
  C.tree_index = build_leis(G, cfg);
  return C;
}

struct ColorResult {
  std::vector<int> colors;  // sorted
  std::size_t visited = 0;  // distinct catalog vertices answered
  std::size_t walk_length = 0;
  SessionCounters counters;
};

/// Bound on the vertices visited by the tree variant for t reported colors.
inline double colored_visit_bound(std::size_t t, std::size_t m) {
  double tt = static_cast<double>(std::max<std::size_t>(t, 1)), lm = std::log2(static_cast<double>(std::max<std::size_t>(m, 2)));
  return 4.0 * static_cast<double>(t) * (1.0 + std::log2(static_cast<double>(m) / tt)) + 2.0 * lm;
}

inline ColorResult query_colors(const ColoredCatalog& C, const LowerHalfspace& h, ColorVariant variant) {
  ColorResult r;
  std::unordered_map<int, const Point3*> where;
  for (const auto& p : C.points) where[p.id] = &p.p;
  const Point3 q = h.dual();
  auto nonempty = [&](const VertexAnswer& a) { return a.above_k_level || !detail::filter_lists(a, where, h).empty(); };

  if (variant == ColorVariant::Path) {
    auto [s, a] = open_session(C.path_index, q, 0);
    for (std::size_t c = 0; c < C.m; ++c) {
      VertexAnswer b = c == 0 ? a : advance_session(s, static_cast<int>(c));
      if (nonempty(b)) r.colors.push_back(static_cast<int>(c));
    }
    r.visited = C.m;
    r.walk_length = s.walk_length;
    r.counters = s.counters;
    return r;
  }

  std::vector<char> seen(C.tree.nodes.size(), 0);
  auto [s, a] = open_session(C.tree_index, q, 0);
  seen[0] = 1;
  std::function<void(int, const VertexAnswer&)> go = [&](int v, const VertexAnswer& av) {
    if (!nonempty(av)) return;
    const auto& n = C.tree.nodes[v];
    if (C.tree.leaf(v)) {
      r.colors.push_back(static_cast<int>(n.lo));
      return;
    }
    for (int child : {n.left, n.right}) {
      VertexAnswer ac = advance_session(s, child);
      seen[child] = 1;
      go(child, ac);
      advance_session(s, v);
    }
  };
  go(0, a);
  for (char b : seen) r.visited += b;
  r.walk_length = s.walk_length;
  r.counters = s.counters;
  return r;
}

inline Point3 random_dual_point(Rng& rng, std::set<std::pair<long, long>>& used) {
  std::uniform_int_distribution<long> s(-10000, 10000), c(-100000, 100000);
  for (int retries = 0; retries <= 100; ++retries) {
    long a = s(rng), b = s(rng);
    if (used.insert({a, b}).second) return {ratio(a, 10000), ratio(b, 10000), ratio(c(rng), 1000)};
  }
  throw std::runtime_error("random_dual_point: retry budget exhausted");
}

/// Points whose dual planes have the slope and offset ranges of random_planes.
/// Integer weights in [0, max_weight] so that ties occur.
inline std::vector<WeightedPoint> random_weighted_points(Rng& rng, std::size_t n, long max_weight) {
  std::set<std::pair<long, long>> used;
  std::vector<WeightedPoint> out;
  std::uniform_int_distribution<long> w(0, max_weight);
  for (std::size_t i = 0; i < n; ++i) out.push_back({random_dual_point(rng, used), w(rng), static_cast<int>(i)});
  return out;
}

inline std::vector<ColoredPoint> random_colored_points(Rng& rng, std::size_t n, std::size_t m) {
  std::set<std::pair<long, long>> used;
  std::vector<ColoredPoint> out;
  std::uniform_int_distribution<int> c(0, static_cast<int>(m) - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back({random_dual_point(rng, used), c(rng), static_cast<int>(i)});
  return out;
}

/// Random halfspace whose boundary sits near the k-th lowest point in its direction.
inline LowerHalfspace random_halfspace(Rng& rng, const std::vector<Point3>& pts, std::size_t k, const Box& box) {
  std::vector<Plane> H;
  for (std::size_t i = 0; i < pts.size(); ++i) H.push_back(dual_plane(pts[i], static_cast<int>(i)));
  Point3 q = random_query_near_level(rng, H, k, box);
  return {q.x, q.y, q.z};
}

}  // namespace leis
