#pragma once
// Lower-envelope iterated search over a catalog graph: every vertex v carries
// a plane set H_v, and a query point q is tested against the k-level of H_v
// for each vertex of a walk revealed one vertex at a time.
//
// Light vertices (|H_v| <= x) keep one secondary k-cutting. Heavy vertices get
// an x-shallow cutting whose triangles each own a secondary k-cutting, and an
// overlay of the heavy cuttings near v. An anchor of that overlay stores, for
// each nearby heavy u, the triangles of C_u above its three corners; while the
// walk stays near the anchor's owner no further point location is needed.

#include <leis/overlay.hpp>
#include <leis/rdk.hpp>
#include <leis/shallow_cutting.hpp>

#include <bit>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <unordered_map>

namespace leis {

enum class CatalogVariant { Path, General };

struct CatalogGraph {
  std::vector<std::vector<Plane>> planes;  // H_v
  std::vector<std::vector<int>> adj;
  std::size_t max_degree = 3;
  CatalogVariant variant = CatalogVariant::General;

  std::size_t vertex_count() const { return planes.size(); }
  std::size_t plane_count() const {
    std::size_t n = 0;
    for (const auto& h : planes) n += h.size();
    return n;
  }
  int add_vertex(std::vector<Plane> h = {}) {
    planes.push_back(std::move(h));
    adj.emplace_back();
    return static_cast<int>(planes.size()) - 1;
  }
  void add_edge(int u, int v) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  bool adjacent(int u, int v) const {
    return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
  }
  std::size_t degree() const {
    std::size_t d = 0;
    for (const auto& a : adj) d = std::max(d, a.size());
    return d;
  }

  /// Vertices in path order; empty if the graph is not a simple path.
  std::vector<int> path_order() const {
    const std::size_t N = vertex_count();
    if (N == 0) return {};
    int start = 0;
    std::size_t edges = 0;
    for (std::size_t v = 0; v < N; ++v) {
      if (adj[v].size() > 2) return {};
      if (adj[v].size() < 2) start = static_cast<int>(v);
      edges += adj[v].size();
    }
    if (edges != 2 * (N - 1)) return {};
    std::vector<int> order{start};
    int prev = -1, cur = start;
    while (order.size() < N) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev) next = w;
      if (next < 0) return {};
      prev = cur;
      cur = next;
      order.push_back(cur);
    }
    return order;
  }

  void validate() const {
    if (adj.size() != planes.size()) throw std::invalid_argument("catalog: adjacency size mismatch");
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (adj[v].size() > max_degree) throw std::invalid_argument("catalog: degree above the declared bound");
      for (int w : adj[v])
        if (w < 0 || static_cast<std::size_t>(w) >= adj.size() || w == static_cast<int>(v))
          throw std::invalid_argument("catalog: bad edge");
    }
    if (variant == CatalogVariant::Path && path_order().empty())
      throw std::invalid_argument("catalog: path variant is not a simple path");
  }

  static CatalogGraph path(std::vector<std::vector<Plane>> H) {
    CatalogGraph G;
    G.variant = CatalogVariant::Path;
    G.max_degree = 2;
    for (auto& h : H) G.add_vertex(std::move(h));
    for (std::size_t v = 1; v < G.vertex_count(); ++v) G.add_edge(static_cast<int>(v) - 1, static_cast<int>(v));
    return G;
  }
};

/// Degree-3 version of a catalog and the translation of walks into it.
struct NormalizedCatalog {
  CatalogGraph graph;
  std::vector<int> root;              // original vertex -> vertex carrying its planes
  std::vector<int> original;          // normalized vertex -> original vertex whose gadget holds it
  std::vector<int> gadget_parent;     // -1 at roots
  std::map<std::pair<int, int>, int> port;  // (u, v) -> vertex of u's gadget holding edge uv

  std::vector<int> translate_walk(const std::vector<int>& walk) const {
    std::vector<int> out;
    if (walk.empty()) return out;
    out.push_back(root[walk[0]]);
    for (std::size_t i = 1; i < walk.size(); ++i) {
      int u = walk[i - 1], v = walk[i];
      auto a = port.find({u, v});
      if (a == port.end()) throw std::invalid_argument("translate_walk: not a walk");
      std::vector<int> down;
      for (int w = a->second; w != root[u]; w = gadget_parent[w]) down.push_back(w);
      out.insert(out.end(), down.rbegin(), down.rend());
      for (int w = port.at({v, u}); w != root[v]; w = gadget_parent[w]) out.push_back(w);
      out.push_back(root[v]);
    }
    return out;
  }

  /// Inverse of translate_walk: the gadget roots visited, as original vertices.
  std::vector<int> restrict_walk(const std::vector<int>& walk) const {
    std::vector<int> out;
    for (int w : walk)
      if (gadget_parent[w] < 0) out.push_back(original[w]);
    return out;
  }
};

inline NormalizedCatalog normalize_catalog(const CatalogGraph& G) {
  G.validate();
  NormalizedCatalog N;
  N.graph.variant = G.variant;
  const std::size_t V = G.vertex_count();
  for (std::size_t v = 0; v < V; ++v) {
    N.graph.add_vertex(G.planes[v]);
    N.root.push_back(static_cast<int>(v));
    N.original.push_back(static_cast<int>(v));
    N.gadget_parent.push_back(-1);
  }
  auto fresh = [&](int parent, int owner) {
    int w = N.graph.add_vertex();
    N.original.push_back(owner);
    N.gadget_parent.push_back(parent);
    N.graph.add_edge(parent, w);
    return w;
  };
  // Spread the neighbors of u over the leaves of a binary tree hanging from `node`.
  std::function<void(int, int, std::vector<int>, std::size_t)> spread = [&](int u, int node, std::vector<int> nb,
                                                                            std::size_t cap) {
    if (nb.size() <= cap) {
      for (int w : nb) N.port[{u, w}] = node;
      return;
    }
    std::size_t half = (nb.size() + 1) / 2;
    std::vector<int> a(nb.begin(), nb.begin() + static_cast<long>(half)), b(nb.begin() + static_cast<long>(half), nb.end());
    spread(u, fresh(node, u), a, 2);
    spread(u, fresh(node, u), b, 2);
  };
  for (std::size_t u = 0; u < V; ++u) spread(static_cast<int>(u), static_cast<int>(u), G.adj[u], 3);
  for (std::size_t u = 0; u < V; ++u)
    for (int v : G.adj[u])
      if (static_cast<int>(u) < v) N.graph.add_edge(N.port.at({static_cast<int>(u), v}), N.port.at({v, static_cast<int>(u)}));
  N.graph.max_degree = std::min<std::size_t>(3, G.max_degree);
  return N;
}

struct LeisConfig {
  std::size_t k = 0;
  std::size_t ell = 0;      // 0 selects the variant default
  std::size_t x = 0;        // 0 selects the variant default
  double c = 3;
  std::size_t x_floor = 0;  // used when k = 0; 0 selects (2 ell)^c
  Box box = default_box();
  CuttingOptions cutting;
  RdkConfig rdk;
  bool verify_cuttings = false;
};

struct ResolvedConfig {
  std::size_t k = 0, ell = 1, x = 1;
};

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < n) ++r;
  return r;
}

inline std::size_t saturating_pow(double base, double e) {
  double v = std::pow(base, e);
  return v >= 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(std::ceil(v));
}

inline ResolvedConfig resolve_config(const LeisConfig& cfg, std::size_t n, CatalogVariant variant) {
  ResolvedConfig r;
  r.k = cfg.k;
  const std::size_t lg = std::max<std::size_t>(1, ceil_log2(std::max<std::size_t>(n, 2)));
  if (cfg.ell) r.ell = cfg.ell;
  else if (variant == CatalogVariant::Path) r.ell = lg * std::max<std::size_t>(1, ceil_log2(lg));
  else r.ell = default_round_length(n);
  std::size_t grow = variant == CatalogVariant::Path ? saturating_pow(2.0 * static_cast<double>(r.ell), cfg.c)
                                                     : saturating_pow(2.0, cfg.c * static_cast<double>(r.ell));
  if (cfg.x) {
    r.x = cfg.x;
  } else if (cfg.k == 0) {
    r.x = cfg.x_floor ? cfg.x_floor : saturating_pow(2.0 * static_cast<double>(r.ell), cfg.c);
  } else {
    r.x = grow >= static_cast<std::size_t>(1e18) / cfg.k ? static_cast<std::size_t>(1e18) : cfg.k * grow;
    r.x = std::min(r.x, std::max<std::size_t>(n, 1));
  }
  r.x = std::max<std::size_t>(r.x, 1);
  if (r.x < r.k) throw std::invalid_argument("leis config: x must be at least k");
  return r;
}

class LeisBuildError : public std::runtime_error {
 public:
  LeisBuildError(int vertex, const std::string& what)
      : std::runtime_error("vertex " + std::to_string(vertex) + ": " + what), vertex(vertex) {}
  int vertex;
};

struct VertexCutting {
  bool heavy = false;
  ShallowCutting primary;                // trivial for light vertices
  std::vector<ShallowCutting> secondary;  // per primary triangle
  int overlay = -1;                       // heavy only
};

/// Point location over the heavy cuttings near an owner vertex.
struct NeighborhoodOverlay {
  struct Geometry {
    Box box;
    std::vector<int> heavy;  // polytope index -> vertex
    std::optional<OverlayIndex> flat;
    std::optional<Cascade> cascade;
    // Cascade anchors: upper triangles of each A_0 cell, with link tables.
    std::vector<std::size_t> cell_offset;
    std::vector<Triangle> cell_tris;
    std::vector<std::vector<std::array<int, 3>>> links;

    std::size_t anchor_count() const { return flat ? flat->anchor_count() : cell_tris.size(); }
    std::uint64_t membership(int a) const {
      if (flat) return flat->membership(a);
      auto it = std::upper_bound(cell_offset.begin(), cell_offset.end(), static_cast<std::size_t>(a));
      return cascade->levels[0].cells[static_cast<std::size_t>(it - cell_offset.begin()) - 1].members;
    }
    int link(int a, std::size_t j, int corner) const {
      if (!(membership(a) >> j & 1)) return -1;
      if (flat) return flat->tris[flat->anchor_tri(a)].links[j][corner];
      return links[a][j][corner];
    }
    Triangle anchor_triangle(int a) const { return flat ? flat->anchor_triangle(a) : cell_tris[a]; }
  };

  int owner = -1;
  std::vector<int> vertices;  // the copy of N_l(owner), sorted
  std::shared_ptr<const Geometry> geo;

  bool covers(int v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }
  int polytope_of(int v) const {
    auto it = std::find(geo->heavy.begin(), geo->heavy.end(), v);
    return it == geo->heavy.end() ? -1 : static_cast<int>(it - geo->heavy.begin());
  }
};

struct LeisSpaceReport {
  std::size_t n = 0, vertices = 0, heavy = 0, k = 0, ell = 0, x = 0;
  std::size_t primary_triangles = 0, primary_list_total = 0;
  std::size_t secondary_triangles = 0, secondary_list_total = 0;
  std::size_t overlays = 0, distinct_overlays = 0, anchors = 0, links = 0;
  std::size_t max_neighborhood = 0, max_overlay_polytopes = 0;
  double build_seconds = 0;

  bool links_bounded() const { return links <= anchors * max_neighborhood * 3; }
  bool heavy_bounded() const { return heavy * x <= n; }

  static std::string csv_header() {
    return "n,vertices,heavy,k,ell,x,primary_triangles,primary_list_total,secondary_triangles,"
           "secondary_list_total,overlays,distinct_overlays,anchors,links,max_neighborhood,"
           "max_overlay_polytopes,build_seconds";
  }
  std::string csv_row() const {
    std::ostringstream o;
    o << n << ',' << vertices << ',' << heavy << ',' << k << ',' << ell << ',' << x << ',' << primary_triangles << ','
      << primary_list_total << ',' << secondary_triangles << ',' << secondary_list_total << ',' << overlays << ','
      << distinct_overlays << ',' << anchors << ',' << links << ',' << max_neighborhood << ','
      << max_overlay_polytopes << ',' << build_seconds;
    return o.str();
  }
};

struct LeisIndex {
  CatalogGraph graph;
  ResolvedConfig cfg;
  Box box;
  std::vector<VertexCutting> cut;
  std::vector<NeighborhoodOverlay> overlays;
  std::vector<int> piece;  // Path variant: piece id per vertex
  LeisSpaceReport space;
};

namespace detail {

inline ShallowCutting secondary_cutting(const std::vector<Plane>& L, std::size_t k, const Box& box,
                                        const CuttingOptions& opt) {
  if (L.empty() || k >= L.size()) return trivial_cutting(L, k, box);
  return build_shallow_cutting(L, k, box, opt);
}

/// The region below a cutting surface, clipped to `box`.
inline Polyhedron region_below(const ShallowCutting& C, const Box& box) {
  Polyhedron P = Polyhedron::from_box(box);
  std::vector<Plane> seen;
  for (const auto& t : C.surface.triangles) {
    if (!t.has_plane) continue;
    bool dup = false;
    for (const auto& h : seen) dup |= h.a == t.plane.a && h.b == t.plane.b && h.c == t.plane.c;
    if (dup) continue;
    seen.push_back(t.plane);
    P = P.clipped(HalfSpace::below(t.plane));
  }
  return P;
}

inline bool xy_inside(const Triangle& t, const Point2& p) {
  std::array<Point2, 3> a{t.p[0].xy(), t.p[1].xy(), t.p[2].xy()};
  if (sign(orient2d(a[0], a[1], a[2])) < 0) std::swap(a[1], a[2]);
  for (int e = 0; e < 3; ++e)
    if (sign(orient2d(a[e], a[(e + 1) % 3], p)) < 0) return false;
  return true;
}

inline std::shared_ptr<const NeighborhoodOverlay::Geometry> build_geometry(const LeisIndex& idx,
                                                                          const std::vector<int>& heavy,
                                                                          const RdkConfig& rdk) {
  auto g = std::make_shared<NeighborhoodOverlay::Geometry>();
  g->heavy = heavy;
  Scalar lo = idx.box.zmin, hi = idx.box.zmax;
  for (int u : heavy)
    for (const auto& t : idx.cut[u].primary.surface.triangles)
      for (const auto& p : t.p) {
        if (p.z < lo) lo = p.z;
        if (p.z > hi) hi = p.z;
      }
  g->box = {idx.box.xmin, idx.box.xmax, idx.box.ymin, idx.box.ymax, lo - 1, hi + 1};
  std::vector<Polyhedron> S;
  std::vector<const Terrain*> surf;
  for (int u : heavy) {
    S.push_back(region_below(idx.cut[u].primary, g->box));
    surf.push_back(&idx.cut[u].primary.surface);
  }
  if (idx.graph.variant == CatalogVariant::Path) {
    g->flat = build_overlay_index(S, g->box, surf);
    return g;
  }
  g->cascade = build_cascade(S, g->box, rdk);
  for (const auto& cell : g->cascade->levels[0].cells) {
    g->cell_offset.push_back(g->cell_tris.size());
    for (const auto& t : upper_triangles(cell.poly)) {
      g->cell_tris.push_back(t);
      std::vector<std::array<int, 3>> L(heavy.size(), {-1, -1, -1});
      for (std::size_t j = 0; j < heavy.size(); ++j) {
        if (!(cell.members >> j & 1)) continue;
        for (int c = 0; c < 3; ++c) L[j][c] = surf[j]->locate(t.p[c].xy());
      }
      g->links.push_back(std::move(L));
    }
  }
  return g;
}

inline std::vector<int> ball(const CatalogGraph& G, int v, std::size_t radius) {
  std::vector<int> dist(G.vertex_count(), -1), out{v};
  dist[v] = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    int u = out[i];
    if (static_cast<std::size_t>(dist[u]) == radius) continue;
    for (int w : G.adj[u])
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        out.push_back(w);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Builds the index over a catalog of maximum degree 3 (see normalize_catalog).
inline LeisIndex build_leis(const CatalogGraph& G, const LeisConfig& config) {
  auto t0 = std::chrono::steady_clock::now();
  G.validate();
  if (G.degree() > 3) throw std::invalid_argument("build_leis: catalog must be normalized to degree 3");
  LeisIndex idx;
  idx.graph = G;
  idx.box = config.box;
  const std::size_t n = G.plane_count(), V = G.vertex_count();
  idx.cfg = resolve_config(config, n, G.variant);
  const auto& rc = idx.cfg;
  idx.cut.resize(V);

  for (std::size_t v = 0; v < V; ++v) {
    const auto& H = G.planes[v];
    auto& vc = idx.cut[v];
    try {
      vc.heavy = H.size() > rc.x;
      if (!vc.heavy) {
        vc.primary = trivial_cutting(H, rc.x, idx.box);
        vc.secondary.push_back(detail::secondary_cutting(H, rc.k, idx.box, config.cutting));
      } else {
        vc.primary = build_shallow_cutting(H, rc.x, idx.box, config.cutting);
        std::unordered_map<int, const Plane*> by_id;
        for (const auto& h : H) by_id[h.id] = &h;
        auto rep = config.verify_cuttings ? verify_cutting(vc.primary, H, rc.x, idx.box) : CuttingReport{};
        if (!rep.pass) throw std::runtime_error("primary cutting: " + rep.failures.front());
        for (const auto& L : vc.primary.conflicts) {
          std::vector<Plane> P;
          for (int id : L) P.push_back(*by_id.at(id));
          vc.secondary.push_back(detail::secondary_cutting(P, rc.k, idx.box, config.cutting));
          if (config.verify_cuttings && !P.empty() && !vc.secondary.back().trivial()) {
            auto r2 = verify_cutting(vc.secondary.back(), P, rc.k, idx.box);
            if (!r2.pass) throw std::runtime_error("secondary cutting: " + r2.failures.front());
          }
        }
      }
    } catch (const LeisBuildError&) {
      throw;
    } catch (const std::exception& e) {
      throw LeisBuildError(static_cast<int>(v), e.what());
    }
  }

  // Neighborhoods: the piece of the path, or the radius-l ball.
  std::vector<std::vector<int>> nbhd(V);
  if (G.variant == CatalogVariant::Path) {
    auto order = G.path_order();
    idx.piece.assign(V, 0);
    std::vector<std::vector<int>> pieces((V + rc.ell - 1) / rc.ell);
    for (std::size_t i = 0; i < order.size(); ++i) {
      idx.piece[order[i]] = static_cast<int>(i / rc.ell);
      pieces[i / rc.ell].push_back(order[i]);
    }
    for (auto& p : pieces) std::sort(p.begin(), p.end());
    for (std::size_t v = 0; v < V; ++v) nbhd[v] = pieces[idx.piece[v]];
  } else {
    for (std::size_t v = 0; v < V; ++v) nbhd[v] = detail::ball(G, static_cast<int>(v), rc.ell);
  }

  std::map<std::vector<int>, std::shared_ptr<const NeighborhoodOverlay::Geometry>> pool;
  std::map<std::vector<int>, int> by_piece;
  for (std::size_t v = 0; v < V; ++v) {
    if (!idx.cut[v].heavy) continue;
    if (G.variant == CatalogVariant::Path) {
      auto it = by_piece.find(nbhd[v]);
      if (it != by_piece.end()) {
        idx.cut[v].overlay = it->second;
        continue;
      }
    }
    std::vector<int> heavy;
    for (int u : nbhd[v])
      if (idx.cut[u].heavy) heavy.push_back(u);
    auto& geo = pool[heavy];
    try {
      if (!geo) {
        RdkConfig rdk = config.rdk;
        rdk.seed = config.rdk.seed * 1000003ULL + v;
        geo = detail::build_geometry(idx, heavy, rdk);
      }
    } catch (const std::exception& e) {
      throw LeisBuildError(static_cast<int>(v), e.what());
    }
    idx.cut[v].overlay = static_cast<int>(idx.overlays.size());
    if (G.variant == CatalogVariant::Path) by_piece[nbhd[v]] = idx.cut[v].overlay;
    idx.overlays.push_back({static_cast<int>(v), nbhd[v], geo});
  }

  auto& S = idx.space;
  S.n = n;
  S.vertices = V;
  S.k = rc.k;
  S.ell = rc.ell;
  S.x = rc.x;
  for (const auto& vc : idx.cut) {
    S.heavy += vc.heavy;
    if (vc.heavy) {
      S.primary_triangles += vc.primary.size();
      for (const auto& L : vc.primary.conflicts) S.primary_list_total += L.size();
    }
    for (const auto& C : vc.secondary) {
      S.secondary_triangles += C.size();
      for (const auto& L : C.conflicts) S.secondary_list_total += L.size();
    }
  }
  S.overlays = idx.overlays.size();
  S.distinct_overlays = pool.size();
  for (const auto& o : idx.overlays) {
    const auto& g = *o.geo;
    S.max_neighborhood = std::max(S.max_neighborhood, o.vertices.size());
    S.max_overlay_polytopes = std::max(S.max_overlay_polytopes, g.heavy.size());
    S.anchors += g.anchor_count();
    for (std::size_t a = 0; a < g.anchor_count(); ++a)
      S.links += 3 * static_cast<std::size_t>(std::popcount(g.membership(static_cast<int>(a))));
  }
  S.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return idx;
}

struct VertexAnswer {
  bool above_k_level = false;
  std::vector<const std::vector<int>*> lists;  // conflict lists of secondary triangles

  std::vector<int> merged() const {
    std::vector<int> out;
    for (const auto* L : lists) out.insert(out.end(), L->begin(), L->end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::size_t max_list() const {
    std::size_t m = 0;
    for (const auto* L : lists) m = std::max(m, L->size());
    return m;
  }
};

struct SessionCounters {
  std::size_t vertices = 0;
  std::size_t relocations = 0;
  std::size_t locator_steps = 0;  // overlay or cascade work during relocations
  std::size_t link_hops = 0;      // corner pointers followed
  std::size_t secondary_queries = 0;
  std::size_t secondary_steps = 0;
};

struct QuerySession {
  const LeisIndex* idx = nullptr;
  Point3 q;
  int current = -1;
  std::size_t walk_length = 0;
  SessionCounters counters;
  // Live anchors as (overlay, anchor). The path variant keeps one per piece,
  // the general variant only the latest.
  std::vector<std::pair<int, int>> anchors;

  std::optional<std::pair<int, int>> anchor_for(int v) const {
    for (const auto& a : anchors)
      if (idx->overlays[a.first].covers(v)) return a;
    return std::nullopt;
  }
};

namespace detail {

inline VertexAnswer answer_from(QuerySession& s, const ShallowCutting& C, std::vector<const std::vector<int>*>& out) {
  ++s.counters.secondary_queries;
  std::size_t st = 0;
  auto t = C.locate_prism(s.q, &st);
  s.counters.secondary_steps += st;
  if (!t) return {true, {}};
  const auto* L = &C.conflicts[*t];
  if (std::find(out.begin(), out.end(), L) == out.end()) out.push_back(L);
  return {};
}

inline VertexAnswer answer_vertex(QuerySession& s, int v) {
  const LeisIndex& idx = *s.idx;
  const VertexCutting& vc = idx.cut[v];
  ++s.counters.vertices;
  std::vector<const std::vector<int>*> lists;
  if (!vc.heavy) {  // Step 1
    if (answer_from(s, vc.secondary[0], lists).above_k_level) return {true, {}};
    return {false, lists};
  }
  auto live = s.anchor_for(v);
  if (!live) {  // Steps 2 and 4
    const auto& ov = idx.overlays[vc.overlay];
    const auto& g = *ov.geo;
    int a;
    if (g.flat) {
      auto r = g.flat->locate_anchor(s.q);
      s.counters.locator_steps += r.steps;
      a = r.anchor;
    } else {
      auto r = cascade_locate(*g.cascade, s.q);
      s.counters.locator_steps += r.total_tests();
      a = -1;
      for (std::size_t t = g.cell_offset[r.cell];
           t < (static_cast<std::size_t>(r.cell) + 1 < g.cell_offset.size() ? g.cell_offset[r.cell + 1]
                                                                            : g.cell_tris.size());
           ++t) {
        ++s.counters.locator_steps;
        if (xy_inside(g.cell_tris[t], s.q.xy())) {
          a = static_cast<int>(t);
          break;
        }
      }
      if (a < 0) throw std::logic_error("leis: no upper triangle of the cascade cell above q");
    }
    ++s.counters.relocations;
    if (idx.graph.variant == CatalogVariant::General) s.anchors.clear();
    live = std::pair<int, int>{vc.overlay, a};
    s.anchors.push_back(*live);
  }
  const auto& ov = idx.overlays[live->first];
  const auto& g = *ov.geo;
  int j = ov.polytope_of(v);
  if (!(g.membership(live->second) >> j & 1)) return {true, {}};  // q above C_v, so above the x-level
  for (int c = 0; c < 3; ++c) {  // Step 3
    ++s.counters.link_hops;
    int t = g.link(live->second, static_cast<std::size_t>(j), c);
    if (answer_from(s, vc.secondary[t], lists).above_k_level) return {true, {}};
  }
  return {false, lists};
}

}  // namespace detail

inline std::pair<QuerySession, VertexAnswer> open_session(const LeisIndex& idx, const Point3& q, int v0) {
  if (v0 < 0 || static_cast<std::size_t>(v0) >= idx.graph.vertex_count())
    throw std::out_of_range("open_session: no such vertex");
  if (!idx.box.contains(q)) throw std::out_of_range("open_session: query outside the domain box");
  QuerySession s;
  s.idx = &idx;
  s.q = q;
  s.current = v0;
  s.walk_length = 1;
  VertexAnswer a = detail::answer_vertex(s, v0);
  return {std::move(s), std::move(a)};
}

inline VertexAnswer advance_session(QuerySession& s, int v) {
  if (v < 0 || static_cast<std::size_t>(v) >= s.idx->graph.vertex_count() || !s.idx->graph.adjacent(s.current, v))
    throw std::invalid_argument("advance_session: vertex is not adjacent to the current one");
  s.current = v;
  ++s.walk_length;
  return detail::answer_vertex(s, v);
}

/// Relocation bound for a walk of `length` vertices.
inline std::size_t relocation_bound(std::size_t length, std::size_t ell) { return (length + ell - 1) / ell + 1; }

/// Oracle check of one answer against H_v.
inline bool answer_sound(const VertexAnswer& a, const std::vector<Plane>& H, const Point3& q, std::size_t k) {
  auto r = level_and_conflicts(q, H);
  if (a.above_k_level) return r.level > k;
  if (a.lists.size() > 3) return false;
  auto got = a.merged();
  for (int id : r.conflicts)
    if (!std::binary_search(got.begin(), got.end(), id)) return false;
  return true;
}

inline std::vector<int> random_walk(const CatalogGraph& G, int start, std::size_t length, Rng& rng) {
  std::vector<int> w{start};
  while (w.size() < length) {
    const auto& nb = G.adj[w.back()];
    if (nb.empty()) break;
    w.push_back(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
  }
  return w;
}

/// Walk through a connected vertex set: Euler tour of a BFS spanning tree.
inline std::vector<int> walk_from_subgraph(const CatalogGraph& G, std::vector<int> vertices) {
  if (vertices.empty()) return {};
  std::sort(vertices.begin(), vertices.end());
  auto in = [&](int v) { return std::binary_search(vertices.begin(), vertices.end(), v); };
  std::vector<std::vector<int>> child(G.vertex_count());
  std::vector<char> seen(G.vertex_count(), 0);
  std::vector<int> bfs{vertices[0]};
  seen[vertices[0]] = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (int w : G.adj[bfs[i]])
      if (in(w) && !seen[w]) {
        seen[w] = 1;
        child[bfs[i]].push_back(w);
        bfs.push_back(w);
      }
  if (bfs.size() != vertices.size()) throw std::invalid_argument("walk_from_subgraph: subgraph is not connected");
  std::vector<int> tour;
  std::function<void(int)> go = [&](int v) {
    tour.push_back(v);
    for (int c : child[v]) {
      go(c);
      tour.push_back(v);
    }
  };
  go(vertices[0]);
  return tour;
}

/// Random catalog: `sizes[v]` planes at vertex v, ids consecutive. General
/// graphs are a random spanning tree plus extra edges, degree at most `d`.
inline CatalogGraph random_catalog(Rng& rng, CatalogVariant variant, const std::vector<std::size_t>& sizes,
                                   std::size_t d = 3, std::size_t extra_edges = 0) {
  std::vector<std::vector<Plane>> H;
  int next = 0;
  for (auto s : sizes) {
    H.push_back(random_planes(rng, s, next));
    next += static_cast<int>(s);
  }
  if (variant == CatalogVariant::Path) return CatalogGraph::path(std::move(H));
  CatalogGraph G;
  G.max_degree = d;
  for (auto& h : H) G.add_vertex(std::move(h));
  const int V = static_cast<int>(G.vertex_count());
  for (int v = 1; v < V; ++v) {
    for (int tries = 0; tries < 1000; ++tries) {
      int u = std::uniform_int_distribution<int>(0, v - 1)(rng);
      if (G.adj[u].size() < d) {
        G.add_edge(u, v);
        break;
      }
    }
    if (G.adj[v].empty()) throw std::runtime_error("random_catalog: could not attach vertex");
  }
  for (std::size_t e = 0, tries = 0; e < extra_edges && tries < 100 * (extra_edges + 1); ++tries) {
    int u = std::uniform_int_distribution<int>(0, V - 1)(rng), v = std::uniform_int_distribution<int>(0, V - 1)(rng);
    if (u == v || G.adjacent(u, v) || G.adj[u].size() >= d || G.adj[v].size() >= d) continue;
    G.add_edge(u, v);
    ++e;
  }
  return G;
}

}  // namespace leis
