#pragma once
// Oracle-backed validation suites and counted-operation benchmarks, shared by
// the command line tool and the acceptance run.

#include <leis/instance_io.hpp>

namespace leis {

struct ValidationReport {
  std::string suite;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool pass() const { return failures.empty(); }
  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures.size() < 100) failures.push_back(what);
  }
  void print(std::ostream& o) const {
    o << "suite " << suite << ": " << (pass() ? "PASS" : "FAIL") << " (" << checks << " checks, " << failures.size()
      << " failures)\n";
    for (const auto& n : notes) o << "  " << n << "\n";
    for (const auto& f : failures) o << "  failure: " << f << "\n";
  }
};

namespace detail {

inline std::string str(const Point3& p) {
  std::ostringstream o;
  o << '(' << p.x << ", " << p.y << ", " << p.z << ')';
  return o.str();
}

inline bool on_boundary(const std::vector<Polyhedron>& S, const Point3& q) {
  for (const auto& P : S)
    if (P.classify(q) == Membership::Boundary) return true;
  return false;
}

inline std::uint64_t membership_oracle(const std::vector<Polyhedron>& S, const Point3& q) {
  std::uint64_t b = 0;
  for (std::size_t j = 0; j < S.size(); ++j)
    if (S[j].contains(q)) b |= std::uint64_t{1} << j;
  return b;
}

}  // namespace detail

/// Shallow-cutting contract: verify_cutting plus coverage and rejection at the queries.
inline ValidationReport validate_cutting(const std::vector<Plane>& H, std::size_t k, const Box& box,
                                         const std::vector<Point3>& queries, const Scalar& max_alpha = 8,
                                         CuttingReport* out = nullptr) {
  ValidationReport R;
  R.suite = "cutting";
  ShallowCutting C = build_shallow_cutting(H, k, box);
  auto rep = verify_cutting(C, H, k, box);
  if (out) *out = rep;
  R.check(rep.pass, "verify_cutting: " + (rep.failures.empty() ? std::string() : rep.failures.front()));
  R.check(rep.alpha <= max_alpha, "alpha " + rep.alpha.get_str() + " above " + max_alpha.get_str());
  R.notes.push_back("triangles " + std::to_string(C.size()) + ", alpha " + rep.alpha.get_str() + ", list_alpha " +
                    rep.list_alpha.get_str());
  for (const auto& q : queries) {
    if (!box.contains_xy(q.xy())) continue;
    auto lv = level_and_conflicts(q, H);
    auto t = C.locate_prism(q);
    if (!t) {
      R.check(lv.level > k, "rejection: q " + detail::str(q) + " above the surface at level " + std::to_string(lv.level));
      continue;
    }
    const auto& L = C.conflicts[*t];
    bool covered = true;
    for (int id : lv.conflicts) covered &= std::binary_search(L.begin(), L.end(), id);
    R.check(covered, "coverage: triangle " + std::to_string(*t) + " misses a plane below " + detail::str(q));
  }
  return R;
}

/// Anchor equality and the probe bound over an overlay of polytopes.
inline ValidationReport validate_overlay(const std::vector<Polyhedron>& S, const Box& box,
                                         const std::vector<Point3>& queries) {
  ValidationReport R;
  R.suite = "overlay";
  auto idx = build_overlay_index(S, box);
  const std::size_t bound = ceil_log2(2 * S.size()) + 1;
  for (std::size_t a = 0; a < idx.anchor_count(); ++a) {
    Triangle t = idx.anchor_triangle(static_cast<int>(a));
    Point3 c = (t.p[0] + t.p[1] + t.p[2]) * ratio(1, 3);
    std::uint64_t want = 0;
    for (std::size_t j = 0; j < S.size(); ++j)
      if (S[j].contains_perturbed(c, {{0, 0, 0}, {0, 0, -1}, {1, 2, 0}})) want |= std::uint64_t{1} << j;
    R.check(idx.membership(static_cast<int>(a)) == want, "anchor " + std::to_string(a) + " membership");
  }
  for (const auto& q : queries) {
    if (!box.contains(q) || q.z >= box.zmax || detail::on_boundary(S, q)) continue;
    auto r = idx.locate_anchor(q);
    R.check(r.members == detail::membership_oracle(S, q), "query " + detail::str(q) + " membership");
    R.check(r.steps <= bound, "query " + detail::str(q) + " used " + std::to_string(r.steps) + " probes");
  }
  R.notes.push_back("anchors " + std::to_string(idx.anchor_count()));
  return R;
}

/// Cascade membership, crossing-list completeness and the hierarchy report.
inline ValidationReport validate_rdk(const std::vector<Polyhedron>& S, const Box& box, const RdkConfig& cfg,
                                     const std::vector<Point3>& queries, std::size_t exhaustive_cells = 5000) {
  ValidationReport R;
  R.suite = "rdk";
  Cascade cs = build_cascade(S, box, cfg);
  for (const auto& q : queries) {
    if (!box.contains(q) || detail::on_boundary(S, q)) continue;
    auto loc = cascade_locate(cs, q);
    R.check(loc.members == detail::membership_oracle(S, q), "query " + detail::str(q) + " membership");
  }
  bool exhaustive = cs.total_cells() <= exhaustive_cells;
  auto rep = validate_hierarchy(cs, exhaustive);
  if (exhaustive) R.check(rep.crossing_complete, "crossing lists incomplete");
  R.notes.push_back(HierarchyReport::csv_header());
  R.notes.push_back(rep.csv_row(cfg.seed));
  return R;
}

/// Recomputes every link of every anchor against the cutting surfaces.
inline void check_links(const LeisIndex& idx, ValidationReport& R) {
  for (std::size_t o = 0; o < idx.overlays.size(); ++o) {
    const auto& g = *idx.overlays[o].geo;
    for (std::size_t a = 0; a < g.anchor_count(); ++a) {
      Triangle T = g.anchor_triangle(static_cast<int>(a));
      Point3 c = (T.p[0] + T.p[1] + T.p[2]) * ratio(1, 3);
      for (std::size_t j = 0; j < g.heavy.size(); ++j) {
        const Terrain& surf = idx.cut[g.heavy[j]].primary.surface;
        for (int k = 0; k < 3; ++k) {
          std::string id = "link overlay " + std::to_string(o) + " anchor " + std::to_string(a) + " vertex " +
                           std::to_string(g.heavy[j]) + " corner " + std::to_string(k);
          int t = g.link(static_cast<int>(a), j, k);
          if (t < 0) {
            R.check(c.z == g.box.zmin || c.z > *surf.height(c.xy()), id + ": absent but the anchor is below the cutting");
            continue;
          }
          bool ok = t < static_cast<int>(surf.triangles.size()) && detail::xy_inside(surf.triangles[t], T.p[k].xy()) &&
                    T.p[k].z <= surf.triangles[t].height(T.p[k].xy());
          R.check(ok, id + ": does not point to the cutting triangle above the corner");
        }
      }
    }
  }
}

struct WalkStats {
  std::size_t walks = 0, vertices = 0, answers_checked = 0, failures = 0, relocation_violations = 0;
  std::vector<double> per_vertex_cost;  // (link hops + secondary steps) / vertices, per walk
};

/// Random walks from random starts; each answer is checked against the level oracle.
inline WalkStats run_leis_walks(const LeisIndex& idx, Rng& rng, std::size_t walks, std::size_t length,
                                ValidationReport* R = nullptr) {
  WalkStats st;
  const auto& G = idx.graph;
  for (std::size_t w = 0; w < walks; ++w) {
    int v0 = std::uniform_int_distribution<int>(0, static_cast<int>(G.vertex_count()) - 1)(rng);
    auto walk = random_walk(G, v0, length, rng);
    int pick = walk[std::uniform_int_distribution<std::size_t>(0, walk.size() - 1)(rng)];
    Point3 q = random_query_near_level(rng, G.planes[pick], idx.cfg.k, idx.box);
    auto [s, a] = open_session(idx, q, walk[0]);
    auto judge = [&](const VertexAnswer& ans, int v) {
      ++st.answers_checked;
      bool ok = answer_sound(ans, G.planes[v], q, idx.cfg.k);
      st.failures += !ok;
      if (R) R->check(ok, "walk " + std::to_string(w) + " vertex " + std::to_string(v) + " q " + detail::str(q));
    };
    judge(a, walk[0]);
    for (std::size_t i = 1; i < walk.size(); ++i) judge(advance_session(s, walk[i]), walk[i]);
    bool within = s.counters.relocations <= relocation_bound(walk.size(), idx.cfg.ell);
    st.relocation_violations += !within;
    if (R)
      R->check(within, "walk " + std::to_string(w) + ": " + std::to_string(s.counters.relocations) +
                           " relocations over " + std::to_string(walk.size()) + " vertices");
    ++st.walks;
    st.vertices += walk.size();
    st.per_vertex_cost.push_back(static_cast<double>(s.counters.link_hops + s.counters.secondary_steps) /
                                 static_cast<double>(walk.size()));
  }
  return st;
}

inline ValidationReport validate_leis(const LeisIndex& idx, std::uint64_t seed, std::size_t walks = 200,
                                      std::size_t length = 24) {
  ValidationReport R;
  R.suite = "leis";
  check_links(idx, R);
  R.check(idx.space.links_bounded(), "space: links exceed anchors * max |N_l| * 3");
  R.check(idx.space.heavy_bounded(), "space: more than n / x heavy vertices");
  Rng rng(seed);
  run_leis_walks(idx, rng, walks, length, &R);
  R.notes.push_back(LeisSpaceReport::csv_header());
  R.notes.push_back(idx.space.csv_row());
  return R;
}

/// The three applications against linear scans on one seeded instance.
inline ValidationReport validate_apps(std::uint64_t seed, std::size_t n = 500, std::size_t queries = 200,
                                      std::size_t colors = 32, const LeisConfig& base = {}) {
  ValidationReport R;
  R.suite = "apps";
  Rng rng(seed);
  auto pts = random_weighted_points(rng, n, static_cast<long>(n / 5));
  auto T = build_weighted_tree(pts, base);
  std::vector<Point3> P;
  for (const auto& p : pts) P.push_back(p.p);
  for (std::size_t i = 0; i < queries; ++i) {
    auto h = random_halfspace(rng, P, std::uniform_int_distribution<std::size_t>(0, n / 4)(rng), default_box());
    std::optional<int> best;
    Scalar bw;
    for (const auto& p : pts)
      if (h.contains(p.p) && (!best || p.w > bw || (p.w == bw && p.id < *best))) {
        best = p.id;
        bw = p.w;
      }
    auto mr = query_max(T, h);
    R.check(mr.id == best, "max query " + std::to_string(i));
    if (mr.id) R.check(mr.descent == T.tree.height, "max query " + std::to_string(i) + " descent");
    long w1 = std::uniform_int_distribution<long>(-2, static_cast<long>(n / 5))(rng);
    long w2 = w1 + std::uniform_int_distribution<long>(0, static_cast<long>(n / 10))(rng);
    std::vector<int> want;
    for (const auto& p : pts)
      if (h.contains(p.p) && w1 <= p.w && p.w <= w2) want.push_back(p.id);
    std::sort(want.begin(), want.end());
    R.check(query_weighted_report(T, h, w1, w2).ids == want, "report query " + std::to_string(i));
  }
  auto cp = random_colored_points(rng, 2 * n, colors);
  auto C = build_colored(cp, colors, base);
  std::vector<Point3> CP;
  for (const auto& p : cp) CP.push_back(p.p);
  for (std::size_t i = 0; i < queries; ++i) {
    auto h = random_halfspace(rng, CP, std::uniform_int_distribution<std::size_t>(0, 60)(rng), default_box());
    std::set<int> s;
    for (const auto& p : cp)
      if (h.contains(p.p)) s.insert(p.color);
    std::vector<int> want(s.begin(), s.end());
    R.check(query_colors(C, h, ColorVariant::Path).colors == want, "colors (i) query " + std::to_string(i));
    auto b = query_colors(C, h, ColorVariant::Tree);
    R.check(b.colors == want, "colors (ii) query " + std::to_string(i));
    R.check(static_cast<double>(b.visited) <= colored_visit_bound(want.size(), colors),
            "colors (ii) query " + std::to_string(i) + " visited " + std::to_string(b.visited));
  }
  return R;
}

struct BenchRecord {
  std::uint64_t seed = 0;
  std::string structure = "leis";
  std::string variant;
  std::size_t n = 0, vertices = 0, k = 0, ell = 0, x = 0;
  std::size_t walks = 0, walk_length = 0;
  std::size_t max_relocations = 0, relocation_bound = 0;
  std::size_t locator_steps = 0, link_hops = 0, secondary_queries = 0, secondary_steps = 0, visited = 0;
  std::size_t median_cost_milli = 0;  // median per-vertex (link hops + secondary steps), times 1000
  std::size_t anchors = 0, links = 0, primary_triangles = 0, secondary_triangles = 0;
  std::size_t failures = 0;

  static std::string csv_header() {
    return "# leis-bench v1\nseed,structure,variant,n,vertices,k,ell,x,walks,walk_length,max_relocations,"
           "relocation_bound,locator_steps,link_hops,secondary_queries,secondary_steps,visited,median_cost_milli,"
           "anchors,links,primary_triangles,secondary_triangles,failures";
  }
  std::string csv_row() const {
    std::ostringstream o;
    o << seed << ',' << structure << ',' << variant << ',' << n << ',' << vertices << ',' << k << ',' << ell << ','
      << x << ',' << walks << ',' << walk_length << ',' << max_relocations << ',' << relocation_bound << ','
      << locator_steps << ',' << link_hops << ',' << secondary_queries << ',' << secondary_steps << ',' << visited
      << ',' << median_cost_milli << ',' << anchors << ',' << links << ',' << primary_triangles << ','
      << secondary_triangles << ',' << failures;
    return o.str();
  }
};

struct BenchParams {
  CatalogVariant variant = CatalogVariant::Path;
  std::size_t n = 512;
  std::size_t vertices = 16;
  std::size_t k = 0;  // 0 selects n / 256
  std::size_t x = 0;  // 0 selects 4 k
  std::size_t ell = 4;
  double c = 3;
  std::size_t walks = 50;
  std::size_t walk_length = 32;
  std::size_t heavy_stride = 1;  // every stride-th vertex gets n / vertices planes, the rest stay light
  std::uint64_t seed = 1;
};

inline double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

/// One row: equal heavy plane sets, counters over random walks.
inline BenchRecord bench_leis(const BenchParams& p) {
  Rng rng(p.seed);
  LeisConfig cfg;
  cfg.k = p.k ? p.k : std::max<std::size_t>(1, p.n / 256);
  cfg.x = p.x ? p.x : 4 * cfg.k;
  std::vector<std::size_t> sizes(p.vertices, p.n / p.vertices);
  for (std::size_t v = 0; v < p.vertices; ++v)
    if (v % std::max<std::size_t>(p.heavy_stride, 1)) sizes[v] = std::max<std::size_t>(cfg.x / 2, 1);
  auto G = random_catalog(rng, p.variant, sizes, 3, p.vertices / 4);
  cfg.ell = p.ell;
  cfg.c = p.c;
  auto idx = build_leis(G, cfg);
  BenchRecord b;
  b.seed = p.seed;
  b.variant = p.variant == CatalogVariant::Path ? "path" : "graph";
  b.n = idx.space.n;
  b.vertices = p.vertices;
  b.k = idx.cfg.k;
  b.ell = idx.cfg.ell;
  b.x = idx.cfg.x;
  b.walks = p.walks;
  b.walk_length = p.walk_length;
  b.relocation_bound = relocation_bound(p.walk_length, idx.cfg.ell);
  b.anchors = idx.space.anchors;
  b.links = idx.space.links;
  b.primary_triangles = idx.space.primary_triangles;
  b.secondary_triangles = idx.space.secondary_triangles;
  std::vector<double> cost;
  for (std::size_t w = 0; w < p.walks; ++w) {
    int v0 = std::uniform_int_distribution<int>(0, static_cast<int>(p.vertices) - 1)(rng);
    auto walk = random_walk(G, v0, p.walk_length, rng);
    int pick = walk[std::uniform_int_distribution<std::size_t>(0, walk.size() - 1)(rng)];
    Point3 q = random_query_near_level(rng, G.planes[pick], idx.cfg.k, idx.box);
    auto [s, a] = open_session(idx, q, walk[0]);
    b.failures += !answer_sound(a, G.planes[walk[0]], q, idx.cfg.k);
    for (std::size_t i = 1; i < walk.size(); ++i)
      b.failures += !answer_sound(advance_session(s, walk[i]), G.planes[walk[i]], q, idx.cfg.k);
    const auto& c = s.counters;
    b.max_relocations = std::max(b.max_relocations, c.relocations);
    b.failures += c.relocations > relocation_bound(walk.size(), idx.cfg.ell);
    b.locator_steps += c.locator_steps;
    b.link_hops += c.link_hops;
    b.secondary_queries += c.secondary_queries;
    b.secondary_steps += c.secondary_steps;
    b.visited += walk.size();
    cost.push_back(static_cast<double>(c.link_hops + c.secondary_steps) / static_cast<double>(walk.size()));
  }
  b.median_cost_milli = static_cast<std::size_t>(std::llround(1000 * median(cost)));
  return b;
}

}  // namespace leis
