#include <leis/rdk.hpp>

#include <gtest/gtest.h>

using namespace leis;

namespace {

Box domain() { return {-100, 100, -100, 100, -100, 100}; }

Polyhedron cube(long lo, long hi) {
  Polyhedron p = Polyhedron::from_box({lo, hi, lo, hi, lo, hi});
  for (auto& f : p.faces) f.artificial = false;
  return p;
}

Polyhedron tetra() { return convex_hull({{0, 0, 0}, {10, 0, 0}, {0, 10, 0}, {0, 0, 10}}); }

bool contains_all(const Polyhedron& outer, const Polyhedron& inner) {
  for (const auto& v : inner.vertices)
    if (!outer.contains(v)) return false;
  return true;
}

// Rational points on a sphere via inverse stereographic projection.
Polyhedron sphere_hull(Rng& rng, std::size_t count, long radius) {
  std::uniform_int_distribution<long> d(-3000, 3000);
  std::vector<Point3> pts;
  std::set<std::pair<long, long>> seen;
  while (pts.size() < count) {
    long a = d(rng), b = d(rng);
    if (!seen.insert({a, b}).second) continue;
    Scalar u = ratio(a, 1000), v = ratio(b, 1000);
    Scalar w = u * u + v * v + 1;
    pts.push_back({2 * u * radius / w, 2 * v * radius / w, (u * u + v * v - 1) * radius / w});
  }
  return convex_hull(pts);
}

std::vector<Polyhedron> random_family(Rng& rng, std::size_t m, std::size_t pts) {
  std::vector<Polyhedron> S;
  std::uniform_int_distribution<long> c(-40, 40);
  for (std::size_t i = 0; i < m; ++i) S.push_back(random_polytope(rng, pts, {c(rng), c(rng), c(rng)}, 30));
  return S;
}

std::uint64_t oracle(const std::vector<Polyhedron>& S, const Point3& q, bool* boundary) {
  std::uint64_t b = 0;
  *boundary = false;
  for (std::size_t j = 0; j < S.size(); ++j) {
    auto mm = S[j].classify(q);
    *boundary |= mm == Membership::Boundary;
    if (mm == Membership::Inside) b |= std::uint64_t{1} << j;
  }
  return b;
}

void check_chain(const Hierarchy& h) {
  for (const auto& P : h.polys) {
    ASSERT_TRUE(P.polytope.valid());
    if (P.parent < 0) {
      EXPECT_EQ(P.kind, PolytopeKind::Original);
      EXPECT_EQ(P.counter, 0u);
      continue;
    }
    const auto& Q = h.polys[P.parent];
    EXPECT_TRUE(P.counter == Q.counter || P.counter == Q.counter + 1);
    if (P.inner_side) EXPECT_TRUE(contains_all(Q.polytope, P.polytope));
    else EXPECT_TRUE(contains_all(P.polytope, Q.polytope));
  }
}

}  // namespace

TEST(RdkRound, TetrahedronIsAlreadySimplex) {
  RdkConfig cfg;
  Rng rng(1);
  HierarchyPolytope P{tetra(), 0, 0, PolytopeKind::Original, true, -1};
  auto out = rdk_round(P, domain(), 3, rng, cfg);
  for (const auto& Q : out) {
    EXPECT_FALSE(Q.inner_side);
    EXPECT_NE(Q.kind, PolytopeKind::Boundary);
    EXPECT_TRUE(contains_all(Q.polytope, P.polytope));
  }
  ASSERT_FALSE(out.empty());
  EXPECT_TRUE(is_halfspace(out.back().polytope));
}

TEST(RdkRound, CubeDeterministicChainsNest) {
  RdkConfig cfg;
  Rng rng(2);
  HierarchyPolytope P{cube(-10, 10), 0, 0, PolytopeKind::Original, true, -1};
  auto out = rdk_round(P, domain(), 3, rng, cfg);
  const Polyhedron* prev[2] = {&P.polytope, &P.polytope};
  std::size_t inner = 0;
  for (const auto& Q : out) {
    ASSERT_TRUE(Q.polytope.valid());
    const Polyhedron*& pr = prev[Q.inner_side ? 0 : 1];
    if (Q.inner_side) {
      EXPECT_TRUE(contains_all(*pr, Q.polytope));
      EXPECT_LT(Q.polytope.vertex_count(), pr->vertex_count());
      ++inner;
    } else {
      EXPECT_TRUE(contains_all(Q.polytope, *pr));
    }
    pr = &Q.polytope;
  }
  EXPECT_GT(inner, 0u);
  EXPECT_TRUE(is_simplex(*prev[0]));
  EXPECT_TRUE(is_halfspace(*prev[1]));
}

TEST(RdkRound, InnerStepIsHullOfSurvivors) {
  Rng rng(3);
  RdkConfig cfg;
  Polyhedron P = random_polytope(rng, 30, {0, 0, 0}, 30);
  Polyhedron Q = inner_step(P, rng, SimplifyMode::Randomized, cfg);
  std::vector<Point3> kept;
  for (const auto& v : P.vertices)
    if (Q.classify(v) == Membership::Boundary) kept.push_back(v);
  Polyhedron H = convex_hull(kept);
  EXPECT_EQ(H.vertex_count(), Q.vertex_count());
  EXPECT_TRUE(contains_all(H, Q) && contains_all(Q, H));
}

TEST(RdkRound, IndependentSetsAreIndependent) {
  Rng rng(4);
  Polyhedron P = sphere_hull(rng, 120, 50);
  auto adj = P.adjacency();
  auto I = independent_vertices(P, 12);
  std::set<int> in(I.begin(), I.end());
  for (int v : I) {
    EXPECT_LE(adj[v].size(), 12u);
    for (int u : adj[v]) EXPECT_FALSE(in.count(u));
  }
  EXPECT_GE(I.size() * 12, P.vertex_count());
}

TEST(RdkRound, RandomizedDeletionStatistics) {
  RdkConfig cfg;
  double fall = 0;
  std::size_t steps = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    Polyhedron P = sphere_hull(rng, 200, 50);
    ASSERT_EQ(P.vertex_count(), 200u);
    for (int s = 0; s < 3; ++s) {
      StepStats st;
      Polyhedron Q = inner_step(P, rng, SimplifyMode::Randomized, cfg, &st);
      EXPECT_GE(8 * st.deleted, st.chosen);
      EXPECT_LE(st.deleted, st.chosen);
      EXPECT_EQ(Q.vertex_count() + st.deleted, P.vertex_count());
      fall += static_cast<double>(Q.vertex_count()) / static_cast<double>(P.vertex_count());
      ++steps;
      P = std::move(Q);
    }
  }
  double mean = fall / static_cast<double>(steps);
  RecordProperty("mean_vertex_ratio_per_step", std::to_string(mean));
  EXPECT_LT(mean, 0.97);
}

TEST(Hierarchy, CountersAndContainment) {
  Rng rng(5);
  auto S = random_family(rng, 2, 12);
  RdkConfig cfg;
  Hierarchy h = build_hierarchy(S, domain(), cfg, rng);
  check_chain(h);
  EXPECT_EQ(h.T, default_round_length(S[0].complexity() + S[1].complexity()));
  std::vector<std::size_t> per(h.max_counter() + 2, 0);
  for (const auto& P : h.polys)
    if (P.kind == PolytopeKind::Boundary || P.kind == PolytopeKind::Original) ++per[P.counter];
  for (std::size_t c = 1; c < per.size(); ++c) EXPECT_LE(per[c], 2 * per[c - 1]);
}

TEST(Cascade, SinglePolytope) {
  std::vector<Polyhedron> S{tetra()};
  RdkConfig cfg;
  Cascade cs = build_cascade(S, domain(), cfg);
  auto r = validate_hierarchy(cs, true);
  EXPECT_LE(r.x, 1u);
  EXPECT_TRUE(r.crossing_complete);
  EXPECT_EQ(cascade_locate(cs, {1, 1, 1}).members, 1u);
  EXPECT_EQ(cascade_locate(cs, {50, 50, 50}).members, 0u);
}

TEST(Cascade, NestedCubes) {
  std::vector<Polyhedron> S{cube(-20, 20), cube(-5, 5)};
  RdkConfig cfg;
  Cascade cs = build_cascade(S, domain(), cfg);
  for (const auto& c : cs.levels[0].cells) {
    Point3 g = c.poly.centroid();
    bool bd = false;
    EXPECT_EQ(c.members, oracle(S, g, &bd));
    EXPECT_FALSE(bd);
  }
  EXPECT_EQ(cascade_locate(cs, {1, 2, 3}).members, 3u);
  EXPECT_EQ(cascade_locate(cs, {10, 2, 3}).members, 1u);
  EXPECT_EQ(cascade_locate(cs, {90, 2, 3}).members, 0u);

  // Crossing counts by exhaustive pairwise intersection.
  std::size_t worst = 0;
  for (std::size_t j = 1; j < cs.levels.size(); ++j)
    for (const auto& a : cs.levels[j].cells) {
      std::size_t k = 0;
      for (const auto& b : cs.levels[j - 1].cells) k += interiors_intersect(a.poly, b.poly);
      EXPECT_EQ(k, a.children.size());
      worst = std::max(worst, k);
    }
  EXPECT_EQ(worst, cs.max_crossing());
  EXPECT_TRUE(verify_crossing_lists(cs));
}

TEST(Cascade, RandomInstances) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    auto S = random_family(rng, 2 + seed % 2, 8);
    RdkConfig cfg;
    cfg.seed = seed;
    Cascade cs = build_cascade(S, domain(), cfg);
    if (cs.total_cells() <= 5000) EXPECT_TRUE(verify_crossing_lists(cs));
    for (int i = 0; i < 2000; ++i) {
      Point3 q = random_point(rng, domain(), 100000);
      bool bd = false;
      std::uint64_t want = oracle(S, q, &bd);
      if (bd) continue;
      auto loc = cascade_locate(cs, q);
      ASSERT_EQ(loc.members, want);
      ASSERT_EQ(loc.level_tests.size(), cs.x());
    }
  }
}

TEST(Cascade, CommonInterior) {
  Rng rng(9);
  std::vector<Polyhedron> S;
  for (int i = 0; i < 3; ++i) S.push_back(random_polytope(rng, 10, {0, 0, 0}, 30));
  S.push_back(cube(-2, 2));
  RdkConfig cfg;
  Cascade cs = build_cascade(S, domain(), cfg);
  EXPECT_EQ(cascade_locate(cs, {ratio(1, 3), ratio(1, 7), ratio(-1, 11)}).members, 15u);
}

TEST(Cascade, RebuildBudget) {
  std::vector<Polyhedron> S{cube(-20, 20), cube(-5, 5)};
  RdkConfig cfg;
  cfg.crossing_threshold = 1;
  cfg.max_rebuilds = 2;
  EXPECT_THROW(build_cascade(S, domain(), cfg), CascadeBuildError);
}

TEST(Cascade, RejectsTooManyPolytopes) {
  std::vector<Polyhedron> S;
  for (int i = 0; i < 20; ++i) S.push_back(tetra());
  RdkConfig cfg;
  EXPECT_THROW(build_cascade(S, domain(), cfg), std::invalid_argument);
}

TEST(Cascade, ReportRow) {
  Rng rng(10);
  auto S = random_family(rng, 2, 8);
  RdkConfig cfg;
  Cascade cs = build_cascade(S, domain(), cfg);
  auto r = validate_hierarchy(cs);
  EXPECT_EQ(r.M, cs.hierarchy.polys.size());
  EXPECT_GT(r.X, 0u);
  EXPECT_LE(r.crossing_constant, 1.0);
  std::string row = r.csv_row(7), header = HierarchyReport::csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}
