#include <leis/terrain.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace leis;

namespace {

Plane P(long a, long b, long c, int id = -1) { return {a, b, c, id}; }

std::vector<Plane> random_planes(std::mt19937_64& rng, int n, long range = 1000) {
  std::uniform_int_distribution<long> d(-range, range);
  std::vector<Plane> H;
  for (int i = 0; i < n; ++i) H.push_back({ratio(d(rng), 100), ratio(d(rng), 100), d(rng), i});
  return H;
}

const Box kBox{-10, 10, -10, 10, 0, 0};

}  // namespace

TEST(EvalPlane, Basics) {
  EXPECT_EQ(eval_plane(P(2, 3, 1), 1, 1), 6);
  EXPECT_EQ(eval_plane(P(0, 0, 0), 5, -7), 0);
  EXPECT_EQ(eval_plane(P(1, 0, 0), Scalar(1, 3), 0), Scalar(1, 3));
}

TEST(LevelAndConflicts, Examples) {
  auto r = level_and_conflicts({0, 0, -10}, {P(0, 0, 0, 0)});
  EXPECT_EQ(r.level, 0u);
  EXPECT_TRUE(r.conflicts.empty());
  r = level_and_conflicts({0, 0, Scalar(1, 2)}, {P(0, 0, 0, 0), P(0, 0, 1, 1)});
  EXPECT_EQ(r.level, 1u);
  EXPECT_EQ(r.conflicts, std::vector<int>{0});
}

TEST(LevelAndConflicts, ReverseScanAgrees) {
  std::mt19937_64 rng(1);
  auto H = random_planes(rng, 50);
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (int t = 0; t < 100; ++t) {
    Point3 q{ratio(d(rng), 100), ratio(d(rng), 100), d(rng)};
    auto r = level_and_conflicts(q, H);
    std::vector<int> back;
    for (auto it = H.rbegin(); it != H.rend(); ++it)
      if (!(it->a * q.x + it->b * q.y + it->c > q.z)) back.push_back(it->id);
    std::reverse(back.begin(), back.end());
    EXPECT_EQ(r.conflicts, back);
    // Raising q never lowers its level.
    EXPECT_LE(r.level, level_of({q.x, q.y, q.z + 1}, H));
  }
}

TEST(LowerEnvelope, TwoPlanes) {
  Terrain t = lower_envelope({P(1, 0, 0, 0), P(-1, 0, 0, 1)}, kBox);
  EXPECT_EQ(*t.height({2, 0}), -2);
  EXPECT_EQ(*t.height({-3, 5}), -3);
}

TEST(LowerEnvelope, Singleton) {
  Terrain t = lower_envelope({P(0, 0, 7, 0)}, kBox);
  ASSERT_TRUE(t.is_infinite());
  EXPECT_EQ(*t.height({3, 3}), 7);
}

TEST(LowerEnvelope, EmptyRejected) { EXPECT_THROW(lower_envelope({}, kBox), std::invalid_argument); }

TEST(LowerEnvelope, PointwiseMinimum) {
  std::mt19937_64 rng(2);
  auto H = random_planes(rng, 64);
  Terrain t = lower_envelope(H, kBox);
  EXPECT_LE(t.triangles.size(), 6 * H.size());
  std::uniform_int_distribution<long> d(-1000, 1000);
  for (int s = 0; s < 1000; ++s) {
    Point2 p{ratio(d(rng), 100), ratio(d(rng), 100)};
    Scalar m = H[0].eval(p);
    for (const auto& h : H) m = min(m, h.eval(p));
    ASSERT_EQ(*t.height(p), m);
  }
}

TEST(Duality, Involution) {
  Point3 o{0, 0, 0};
  Plane h = dualize(o);
  EXPECT_TRUE(h.same_graph(P(0, 0, 0)));
  EXPECT_EQ(dualize(h), o);
}

TEST(Duality, IncidenceReversal) {
  auto check = [](const Point3& p, const Plane& h) {
    bool p_below_h = p.z < h.eval(p);
    Point3 hd = dualize(h);
    Plane pd = dualize(p);
    bool hd_below_pd = hd.z < pd.eval(hd);
    EXPECT_EQ(p_below_h, hd_below_pd);
    EXPECT_EQ(p.z == h.eval(p), hd.z == pd.eval(hd));
  };
  check({1, 2, 3}, P(1, 2, 1));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 100; ++i) {
    Point3 p{d(rng), d(rng), d(rng)};
    Plane h{d(rng), d(rng), d(rng), 0};
    check(p, h);
    EXPECT_EQ(dualize(dualize(p)), p);
    EXPECT_TRUE(dualize(dualize(h)).same_graph(h));
  }
}

TEST(LiftCircle, Examples) {
  Plane u = lift_circle(0, 0, 1);
  EXPECT_TRUE(u.same_graph(P(0, 0, 1)));
  EXPECT_LT(lift_point(0, 0).z, u.eval(0, 0));
  Plane z = lift_circle(1, 1, 0);
  EXPECT_TRUE(z.same_graph(P(2, 2, -2)));
  EXPECT_EQ(lift_point(1, 1).z, z.eval(1, 1));
  EXPECT_THROW(lift_circle(0, 0, -1), std::invalid_argument);
}

TEST(LiftCircle, AgreesWithDistance) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> d(-20, 20);
  for (int c = 0; c < 50; ++c) {
    Scalar cx = d(rng), cy = d(rng), r = std::abs(d(rng));
    Plane h = lift_circle(cx, cy, r);
    for (int t = 0; t < 50; ++t) {
      Scalar u(d(rng), 2), v(d(rng), 2);
      Point3 l = lift_point(u, v);
      bool inside = (u - cx) * (u - cx) + (v - cy) * (v - cy) <= r * r;
      EXPECT_EQ(inside, l.z <= h.eval(l));
    }
  }
}

TEST(ParseScalar, Forms) {
  EXPECT_EQ(parse_scalar("-3/6"), Scalar(-1, 2));
  EXPECT_EQ(parse_scalar("12"), 12);
  EXPECT_THROW(parse_scalar("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_scalar("x"), std::invalid_argument);
}

TEST(Polytope, UnitCube) {
  Polyhedron c = Polyhedron::from_box({0, 1, 0, 1, 0, 1});
  EXPECT_TRUE(c.valid());
  EXPECT_EQ(c.complexity(), 8u + 12u + 6u);
  EXPECT_EQ(polytope_membership(c, {Scalar(1, 2), Scalar(1, 2), Scalar(1, 2)}), Membership::Inside);
  EXPECT_EQ(polytope_membership(c, {0, 0, 0}), Membership::Boundary);
  EXPECT_EQ(polytope_membership(c, {2, 0, 0}), Membership::Outside);
  EXPECT_THROW(polytope_membership(Polyhedron{}, {0, 0, 0}), std::invalid_argument);
}

TEST(Polytope, HullMembershipOracle) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-100, 100);
  std::vector<Point3> pts;
  for (int i = 0; i < 20; ++i) pts.push_back({d(rng), d(rng), d(rng)});
  Polyhedron h = convex_hull(pts);
  ASSERT_TRUE(h.valid());
  for (int t = 0; t < 200; ++t) {
    Point3 q{d(rng), d(rng), d(rng)};
    auto with = pts;
    with.push_back(q);
    Polyhedron h2 = convex_hull(with);
    bool unchanged = h2.vertex_count() == h.vertex_count();
    for (const auto& v : h2.vertices)
      unchanged &= std::find(h.vertices.begin(), h.vertices.end(), v) != h.vertices.end();
    bool is_vertex = std::find(h.vertices.begin(), h.vertices.end(), q) != h.vertices.end();
    Membership m = polytope_membership(h, q);
    EXPECT_EQ(m != Membership::Outside, unchanged);
    if (is_vertex) {
      EXPECT_EQ(m, Membership::Boundary);
    }
  }
}

TEST(Polytope, ClipKeepsEuler) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<long> d(-100, 100);
  Polyhedron p = Polyhedron::from_box({-50, 50, -50, 50, -50, 50});
  for (int i = 0; i < 40; ++i) {
    HalfSpace h{d(rng), d(rng), d(rng), 60 + std::abs(d(rng))};
    p = p.clipped(h);
    ASSERT_TRUE(p.valid());
  }
}
