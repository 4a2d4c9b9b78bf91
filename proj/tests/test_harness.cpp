#include <leis/validate.hpp>

#include <gtest/gtest.h>

using namespace leis;

namespace {

std::string dump(const Instance& I) {
  std::ostringstream o;
  write_instance(o, I);
  return o.str();
}

Instance reparse(const Instance& I) {
  std::istringstream in(dump(I));
  return read_instance(in);
}

}  // namespace

TEST(InstanceIo, RoundTripEveryKind) {
  for (std::string kind : {"planes", "weighted-points", "colored-points", "catalog", "polytopes"}) {
    InstanceSpec s;
    s.kind = kind;
    s.n = 40;
    s.m = 3;
    s.queries = 5;
    s.shape = CatalogShape::RandomDegree3;
    Instance I = generate_instance(s);
    EXPECT_EQ(dump(reparse(I)), dump(I)) << kind;
  }
}

TEST(InstanceIo, RationalsAndComments) {
  std::istringstream in("# header next\nleis-instance 1\nkind planes\nplane 0 1/2 -3/6 7 # trailing\nquery 1 2 3\n");
  Instance I = read_instance(in);
  ASSERT_EQ(I.planes.size(), 1u);
  EXPECT_EQ(I.planes[0].a, ratio(1, 2));
  EXPECT_EQ(I.planes[0].b, ratio(-1, 2));
  EXPECT_EQ(I.queries.size(), 1u);
}

TEST(InstanceIo, MalformedInputsRejected) {
  for (const char* text : {"kind planes\n", "leis-instance 2\n", "leis-instance 1\nplane 0 1 x 2\n",
                           "leis-instance 1\nbogus 1\n", "leis-instance 1\nplane 0 1\n", "leis-instance 1\nplane 0 1/0 1 1\n"}) {
    std::istringstream in(text);
    EXPECT_ANY_THROW(read_instance(in)) << text;
  }
}

TEST(InstanceIo, GenerateRejectsEmptyAndUnknown) {
  InstanceSpec s;
  s.n = 0;
  EXPECT_THROW(generate_instance(s), std::invalid_argument);
  s.n = 10;
  s.kind = "cubes";
  EXPECT_THROW(generate_instance(s), std::invalid_argument);
}

TEST(InstanceIo, GenerateIsDeterministic) {
  InstanceSpec s;
  s.kind = "catalog";
  s.n = 200;
  s.seed = 42;
  s.queries = 10;
  EXPECT_EQ(dump(generate_instance(s)), dump(generate_instance(s)));
  InstanceSpec t = s;
  t.seed = 43;
  EXPECT_NE(dump(generate_instance(s)), dump(generate_instance(t)));
}

TEST(InstanceIo, PathCatalogStructure) {
  InstanceSpec s;
  s.kind = "catalog";
  s.n = 320;
  s.vertices = 32;
  Instance I = generate_instance(s);
  CatalogGraph G = I.catalog();
  EXPECT_EQ(G.vertex_count(), 32u);
  std::size_t edges = 0;
  for (int v = 0; v < 32; ++v) edges += G.adj[v].size();
  EXPECT_EQ(edges / 2, 31u);
  EXPECT_EQ(G.plane_count(), 320u);
  std::set<int> ids;
  for (const auto& H : G.planes)
    for (const auto& h : H) EXPECT_TRUE(ids.insert(h.id).second);
  EXPECT_EQ(G.path_order().size(), 32u);
}

TEST(Validate, CuttingSuite) {
  Rng rng(1);
  auto H = random_planes(rng, 200);
  std::vector<Point3> Q;
  for (int i = 0; i < 100; ++i) Q.push_back(random_query_near_level(rng, H, 10, default_box()));
  auto R = validate_cutting(H, 10, default_box(), Q);
  EXPECT_TRUE(R.pass()) << R.failures.front();
  EXPECT_GT(R.checks, 50u);
}

TEST(Validate, OverlayAndRdkSuites) {
  InstanceSpec s;
  s.kind = "polytopes";
  s.n = 24;
  s.m = 3;
  s.queries = 200;
  Instance I = generate_instance(s);
  auto S = I.polytopes();
  auto a = validate_overlay(S, I.box, I.queries);
  EXPECT_TRUE(a.pass());
  auto b = validate_rdk(S, I.box, RdkConfig{}, I.queries);
  EXPECT_TRUE(b.pass());
}

TEST(Validate, LeisSuiteAndCorruptedLink) {
  Rng rng(2);
  std::vector<std::size_t> sizes(8, 12);
  sizes[3] = 200;
  auto G = random_catalog(rng, CatalogVariant::Path, sizes);
  LeisConfig cfg;
  cfg.k = 4;
  cfg.x = 40;
  cfg.ell = 4;
  auto idx = build_leis(G, cfg);
  auto R = validate_leis(idx, 1, 40, 16);
  ASSERT_TRUE(R.pass()) << R.failures.front();

  ASSERT_FALSE(idx.overlays.empty());
  auto geo = std::make_shared<NeighborhoodOverlay::Geometry>(*idx.overlays[0].geo);
  bool flipped = false;
  for (std::size_t a = 0; a < geo->anchor_count() && !flipped; ++a)
    if (geo->link(static_cast<int>(a), 0, 0) >= 0) {
      int& l = geo->flat ? geo->flat->tris[geo->flat->anchor_tri(static_cast<int>(a))].links[0][0] : geo->links[a][0][0];
      l = l == 0 ? 1 : 0;
      flipped = true;
    }
  ASSERT_TRUE(flipped);
  idx.overlays[0].geo = geo;
  ValidationReport bad;
  check_links(idx, bad);
  ASSERT_FALSE(bad.pass());
  EXPECT_NE(bad.failures.front().find("link overlay 0 anchor"), std::string::npos);
}

TEST(Validate, AppsSuite) {
  auto R = validate_apps(3, 150, 40, 8);
  EXPECT_TRUE(R.pass()) << R.failures.front();
}

TEST(Bench, RowIsIntegerCsv) {
  BenchParams p;
  p.n = 256;
  p.vertices = 8;
  p.walks = 5;
  p.walk_length = 8;
  auto b = bench_leis(p);
  EXPECT_EQ(b.failures, 0u);
  EXPECT_LE(b.max_relocations, b.relocation_bound);
  auto header = BenchRecord::csv_header();
  auto cols = std::count(header.begin(), header.end(), ',');
  auto row = b.csv_row();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), cols);
  EXPECT_EQ(row.find('.'), std::string::npos);
}

TEST(InstanceIo, CuttingRoundTrip) {
  Rng rng(9);
  auto H = random_planes(rng, 120);
  for (std::size_t k : {0, 6, 200}) {
    auto C = build_shallow_cutting(H, k, default_box());
    std::stringstream io;
    write_cutting(io, C, 9);
    CuttingFile F = read_cutting(io);
    EXPECT_EQ(F.k, k);
    EXPECT_EQ(F.alpha, C.alpha);
    ASSERT_EQ(F.prisms.size(), C.size());
    for (std::size_t t = 0; t < C.size(); ++t) {
      EXPECT_EQ(F.prisms[t].conflicts, C.conflicts[t]);
      const auto& a = F.prisms[t].tri;
      const auto& b = C.surface.triangles[t];
      EXPECT_EQ(a.infinite, b.infinite);
      EXPECT_EQ(a.has_plane, b.has_plane);
      if (b.has_plane) EXPECT_TRUE(a.plane.same_graph(b.plane));
    }
  }
}
