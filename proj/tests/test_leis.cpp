#include <leis/leis.hpp>

#include <gtest/gtest.h>

using namespace leis;

namespace {

std::vector<std::size_t> sizes_with_heavy(std::size_t V, std::size_t every, std::size_t heavy, std::size_t light) {
  std::vector<std::size_t> s;
  for (std::size_t v = 0; v < V; ++v) s.push_back(v % every == 0 ? heavy : light);
  return s;
}

Point3 query_for(Rng& rng, const CatalogGraph& G, const std::vector<int>& walk, std::size_t k, const Box& box) {
  int v = walk[std::uniform_int_distribution<std::size_t>(0, walk.size() - 1)(rng)];
  return random_query_near_level(rng, G.planes[v], k, box);
}

std::size_t run_walks(const LeisIndex& idx, Rng& rng, std::size_t walks, std::size_t length) {
  const auto& G = idx.graph;
  std::size_t bad = 0;
  for (std::size_t w = 0; w < walks; ++w) {
    int v0 = std::uniform_int_distribution<int>(0, static_cast<int>(G.vertex_count()) - 1)(rng);
    auto walk = random_walk(G, v0, length, rng);
    Point3 q = query_for(rng, G, walk, idx.cfg.k, idx.box);
    auto [s, a] = open_session(idx, q, walk[0]);
    bad += !answer_sound(a, G.planes[walk[0]], q, idx.cfg.k);
    for (std::size_t i = 1; i < walk.size(); ++i) {
      auto b = advance_session(s, walk[i]);
      bad += !answer_sound(b, G.planes[walk[i]], q, idx.cfg.k);
      EXPECT_LE(b.lists.size(), 3u);
    }
    EXPECT_LE(s.counters.relocations, relocation_bound(walk.size(), idx.cfg.ell));
  }
  return bad;
}

}  // namespace

TEST(Normalize, PathUnchanged) {
  Rng rng(1);
  auto G = random_catalog(rng, CatalogVariant::Path, {3, 4, 5, 6});
  auto N = normalize_catalog(G);
  EXPECT_EQ(N.graph.vertex_count(), 4u);
  for (int v = 0; v < 4; ++v) {
    EXPECT_EQ(N.root[v], v);
    EXPECT_EQ(N.graph.adj[v], G.adj[v]);
  }
}

TEST(Normalize, StarGadget) {
  CatalogGraph G;
  G.max_degree = 5;
  for (int v = 0; v < 6; ++v) G.add_vertex();
  for (int v = 1; v < 6; ++v) G.add_edge(0, v);
  auto N = normalize_catalog(G);
  EXPECT_LE(N.graph.degree(), 3u);
  for (int v = 1; v < 6; ++v) {
    auto w = N.translate_walk({0, v});
    EXPECT_LE(w.size() - 1, 2 * ceil_log2(5) + 1);
    for (std::size_t i = 1; i < w.size(); ++i) EXPECT_TRUE(N.graph.adjacent(w[i - 1], w[i]));
  }
  for (std::size_t v = 6; v < N.graph.vertex_count(); ++v) EXPECT_TRUE(N.graph.planes[v].empty());
}

TEST(Normalize, WalksRoundTrip) {
  Rng rng(2);
  std::vector<std::size_t> sizes(40, 2);
  auto G = random_catalog(rng, CatalogVariant::General, sizes, 8, 80);
  auto N = normalize_catalog(G);
  EXPECT_LE(N.graph.degree(), 3u);
  for (int i = 0; i < 100; ++i) {
    auto walk = random_walk(G, std::uniform_int_distribution<int>(0, 39)(rng), 30, rng);
    auto t = N.translate_walk(walk);
    for (std::size_t j = 1; j < t.size(); ++j) ASSERT_TRUE(N.graph.adjacent(t[j - 1], t[j]));
    EXPECT_EQ(N.restrict_walk(t), walk);
    EXPECT_LE(t.size() - 1, (walk.size() - 1) * (2 * ceil_log2(G.degree()) + 1));
  }
}

TEST(Config, Defaults) {
  LeisConfig c;
  c.k = 2;
  auto p = resolve_config(c, 1024, CatalogVariant::Path);
  EXPECT_EQ(p.ell, 10u * 4u);
  EXPECT_EQ(p.x, 1024u);  // k (2 l)^3 capped at n
  auto g = resolve_config(c, 1024, CatalogVariant::General);
  EXPECT_EQ(g.ell, 4u);
  EXPECT_EQ(g.x, 1024u);
  c.k = 0;
  EXPECT_EQ(resolve_config(c, 1024, CatalogVariant::General).x, 512u);
  c.x_floor = 7;
  EXPECT_EQ(resolve_config(c, 1024, CatalogVariant::General).x, 7u);
  c.k = 5;
  c.x = 3;
  EXPECT_THROW(resolve_config(c, 1024, CatalogVariant::Path), std::invalid_argument);
}

TEST(BuildLeis, AllLight) {
  Rng rng(3);
  auto G = random_catalog(rng, CatalogVariant::General, std::vector<std::size_t>(10, 20));
  LeisConfig cfg;
  cfg.k = 2;
  cfg.x = 50;
  auto idx = build_leis(G, cfg);
  EXPECT_EQ(idx.space.heavy, 0u);
  EXPECT_TRUE(idx.overlays.empty());
  for (const auto& vc : idx.cut) {
    EXPECT_TRUE(vc.primary.trivial());
    EXPECT_EQ(vc.secondary.size(), 1u);
  }
  EXPECT_EQ(run_walks(idx, rng, 50, 12), 0u);
}

TEST(BuildLeis, PathOfEightOneHeavy) {
  Rng rng(4);
  std::vector<std::size_t> sizes(8, 10);
  sizes[3] = 200;
  auto G = random_catalog(rng, CatalogVariant::Path, sizes);
  LeisConfig cfg;
  cfg.k = 1;
  cfg.x = 30;
  cfg.ell = 8;
  auto idx = build_leis(G, cfg);
  ASSERT_EQ(idx.overlays.size(), 1u);
  EXPECT_EQ(idx.overlays[0].owner, 3);
  EXPECT_LE(idx.overlays[0].vertices.size(), 2 * idx.cfg.ell + 1);
  EXPECT_EQ(idx.overlays[0].geo->heavy, std::vector<int>{3});
  for (int v = 0; v < 8; ++v) EXPECT_EQ(idx.cut[v].overlay >= 0, v == 3);
}

TEST(BuildLeis, LinkPresenceMatchesCorners) {
  for (auto variant : {CatalogVariant::Path, CatalogVariant::General}) {
    Rng rng(5);
    auto sizes = sizes_with_heavy(32, 8, 380, 16);
    auto G = random_catalog(rng, variant, sizes, 3, 6);
    ASSERT_LE(G.plane_count(), 2000u);
    LeisConfig cfg;
    cfg.k = 4;
    cfg.x = 60;
    cfg.ell = variant == CatalogVariant::Path ? 16 : 3;
    auto idx = build_leis(G, cfg);
    ASSERT_GT(idx.overlays.size(), 0u);
    std::size_t checked = 0;
    for (const auto& ov : idx.overlays) {
      const auto& g = *ov.geo;
      for (std::size_t a = 0; a < g.anchor_count(); ++a) {
        Triangle T = g.anchor_triangle(static_cast<int>(a));
        Point3 c = (T.p[0] + T.p[1] + T.p[2]) * ratio(1, 3);
        for (std::size_t j = 0; j < g.heavy.size(); ++j) {
          const Terrain& surf = idx.cut[g.heavy[j]].primary.surface;
          bool present = g.link(static_cast<int>(a), j, 0) >= 0;
          if (!present) {
            if (c.z == g.box.zmin) continue;  // nothing below the floor
            EXPECT_GT(c.z, *surf.height(c.xy()));
            continue;
          }
          EXPECT_LE(c.z, *surf.height(c.xy()));
          for (int k = 0; k < 3; ++k) {
            int t = g.link(static_cast<int>(a), j, k);
            ASSERT_GE(t, 0);
            EXPECT_LE(T.p[k].z, surf.triangles[t].height(T.p[k].xy()));
            EXPECT_TRUE(detail::xy_inside(surf.triangles[t], T.p[k].xy()));
          }
          ++checked;
        }
      }
    }
    EXPECT_GT(checked, 0u);
    EXPECT_TRUE(idx.space.links_bounded());
    EXPECT_TRUE(idx.space.heavy_bounded());
  }
}

TEST(Session, LightAboveKLevel) {
  CatalogGraph G = CatalogGraph::path({{{0, 0, 0, 0}, {0, 0, 1, 1}, {0, 0, 2, 2}}});
  LeisConfig cfg;
  cfg.k = 1;
  cfg.x = 5;
  auto idx = build_leis(G, cfg);
  Point3 q{0, 0, 50};
  auto [s, a] = open_session(idx, q, 0);
  EXPECT_TRUE(a.above_k_level);
  EXPECT_GT(level_and_conflicts(q, G.planes[0]).level, 1u);
}

TEST(Session, HeavyBelowEnvelope) {
  Rng rng(6);
  auto G = random_catalog(rng, CatalogVariant::Path, {200, 10, 10});
  LeisConfig cfg;
  cfg.k = 0;
  cfg.x = 20;
  cfg.ell = 4;
  auto idx = build_leis(G, cfg);
  ASSERT_TRUE(idx.cut[0].heavy);
  Point3 q{1, 2, -900};
  ASSERT_EQ(level_and_conflicts(q, G.planes[0]).level, 0u);
  auto [s, a] = open_session(idx, q, 0);
  EXPECT_FALSE(a.above_k_level);
  ASSERT_EQ(s.anchors.size(), 1u);
  const auto& g = *idx.overlays[s.anchors[0].first].geo;
  EXPECT_EQ(g.membership(s.anchors[0].second) & 1, 1u);
  EXPECT_TRUE(answer_sound(a, G.planes[0], q, 0));
}

TEST(Session, EmptyCatalogs) {
  CatalogGraph G = CatalogGraph::path({{}, {}, {}});
  auto idx = build_leis(G, {});
  auto [s, a] = open_session(idx, {0, 0, 0}, 1);
  EXPECT_FALSE(a.above_k_level);
  EXPECT_TRUE(a.merged().empty());
  EXPECT_TRUE(advance_session(s, 2).merged().empty());
  EXPECT_THROW(advance_session(s, 0), std::invalid_argument);
}

TEST(Session, AnchorStableInsideNeighborhood) {
  Rng rng(7);
  auto G = random_catalog(rng, CatalogVariant::General, {200, 200, 10, 200, 10, 10}, 3, 2);
  LeisConfig cfg;
  cfg.k = 2;
  cfg.x = 40;
  cfg.ell = 6;
  auto idx = build_leis(G, cfg);
  for (int i = 0; i < 30; ++i) {
    auto walk = random_walk(G, 0, cfg.ell, rng);
    Point3 q = query_for(rng, G, walk, cfg.k, idx.box);
    auto [s, a] = open_session(idx, q, walk[0]);
    auto first = s.anchors;
    for (std::size_t j = 1; j < walk.size(); ++j) {
      advance_session(s, walk[j]);
      EXPECT_EQ(s.anchors, first);
    }
    EXPECT_EQ(s.counters.relocations, 1u);
  }
}

TEST(Session, RelocationsOnLongPathWalks) {
  Rng rng(8);
  auto sizes = sizes_with_heavy(48, 3, 90, 8);
  auto G = random_catalog(rng, CatalogVariant::Path, sizes);
  LeisConfig cfg;
  cfg.k = 2;
  cfg.x = 30;
  cfg.ell = 5;
  auto idx = build_leis(G, cfg);
  for (int i = 0; i < 40; ++i) {
    auto walk = random_walk(G, std::uniform_int_distribution<int>(0, 47)(rng), 120, rng);
    Point3 q = query_for(rng, G, walk, cfg.k, idx.box);
    auto [s, a] = open_session(idx, q, walk[0]);
    for (std::size_t j = 1; j < walk.size(); ++j) advance_session(s, walk[j]);
    EXPECT_LE(s.counters.relocations, relocation_bound(walk.size(), idx.cfg.ell));
  }
  // A monotone sweep touches every piece once.
  std::vector<int> order = G.path_order();
  Point3 q{0, 0, 0};
  auto [s, a] = open_session(idx, q, order[0]);
  for (std::size_t j = 1; j < order.size(); ++j) advance_session(s, order[j]);
  EXPECT_EQ(s.counters.relocations, (order.size() + cfg.ell - 1) / cfg.ell);
}

TEST(Session, RandomWalksMatchOracle) {
  for (auto variant : {CatalogVariant::Path, CatalogVariant::General})
    for (std::size_t k : {0, 4, 64}) {
      Rng rng(100 + k);
      auto sizes = sizes_with_heavy(20, 4, k == 64 ? 260 : 160, 12);
      auto G = random_catalog(rng, variant, sizes, 3, 4);
      LeisConfig cfg;
      cfg.k = k;
      cfg.x = std::max<std::size_t>(2 * k, 24);
      cfg.ell = variant == CatalogVariant::Path ? 10 : 2;
      auto idx = build_leis(G, cfg);
      EXPECT_EQ(run_walks(idx, rng, 60, 20), 0u) << "k=" << k;
    }
}

TEST(Walks, EulerTour) {
  Rng rng(9);
  auto G = random_catalog(rng, CatalogVariant::General, std::vector<std::size_t>(12, 1), 3, 3);
  std::vector<int> all(12);
  std::iota(all.begin(), all.end(), 0);
  auto w = walk_from_subgraph(G, all);
  EXPECT_EQ(w.size(), 2 * 12u - 1);
  std::set<int> seen(w.begin(), w.end());
  EXPECT_EQ(seen.size(), 12u);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_TRUE(G.adjacent(w[i - 1], w[i]));
}

TEST(BuildLeis, RejectsUnnormalized) {
  CatalogGraph G;
  G.max_degree = 4;
  for (int v = 0; v < 5; ++v) G.add_vertex();
  for (int v = 1; v < 5; ++v) G.add_edge(0, v);
  EXPECT_THROW(build_leis(G, {}), std::invalid_argument);
  EXPECT_NO_THROW(build_leis(normalize_catalog(G).graph, {}));
}

TEST(BuildLeis, ErrorsCarryVertex) {
  // Every vertex is heavy, so a radius-2 ball holds more cuttings than the cascade accepts.
  Rng rng(104);
  auto G = random_catalog(rng, CatalogVariant::General, sizes_with_heavy(20, 4, 160, 25), 3, 4);
  LeisConfig cfg;
  cfg.k = 4;
  cfg.x = 24;
  cfg.ell = 2;
  try {
    build_leis(G, cfg);
    FAIL() << "expected a build error";
  } catch (const LeisBuildError& e) {
    EXPECT_GE(e.vertex, 0);
    EXPECT_NE(std::string(e.what()).find("vertex"), std::string::npos);
  }
}
