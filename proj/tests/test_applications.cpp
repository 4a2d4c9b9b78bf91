#include <leis/applications.hpp>

#include <gtest/gtest.h>

using namespace leis;

namespace {

std::optional<int> max_oracle(const std::vector<WeightedPoint>& pts, const LowerHalfspace& h) {
  std::optional<int> best;
  Scalar bw;
  for (const auto& p : pts)
    if (h.contains(p.p) && (!best || p.w > bw || (p.w == bw && p.id < *best))) {
      best = p.id;
      bw = p.w;
    }
  return best;
}

std::vector<int> report_oracle(const std::vector<WeightedPoint>& pts, const LowerHalfspace& h, const Scalar& w1,
                               const Scalar& w2) {
  std::vector<int> out;
  for (const auto& p : pts)
    if (h.contains(p.p) && w1 <= p.w && p.w <= w2) out.push_back(p.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> color_oracle(const std::vector<ColoredPoint>& pts, const LowerHalfspace& h) {
  std::set<int> s;
  for (const auto& p : pts)
    if (h.contains(p.p)) s.insert(p.color);
  return {s.begin(), s.end()};
}

template <class P>
std::vector<Point3> coords(const std::vector<P>& pts) {
  std::vector<Point3> out;
  for (const auto& p : pts) out.push_back(p.p);
  return out;
}

LowerHalfspace flat(long c) { return {0, 0, c}; }

}  // namespace

TEST(HalfspaceMax, EmptyHalfspace) {
  Rng rng(1);
  auto pts = random_weighted_points(rng, 40, 10);
  auto T = build_weighted_tree(pts);
  auto r = query_max(T, flat(-999));
  EXPECT_FALSE(r.id.has_value());
}

TEST(HalfspaceMax, ThreePoints) {
  std::vector<WeightedPoint> pts{{{ratio(1, 10), 0, -10}, 1, 0}, {{ratio(2, 10), 0, 20}, 2, 1}, {{ratio(3, 10), 0, -5}, 3, 2}};
  auto T = build_weighted_tree(pts);
  auto r = query_max(T, flat(0));
  ASSERT_TRUE(r.id.has_value());
  EXPECT_EQ(*r.id, 2);
  EXPECT_EQ(r.descent, T.tree.height);
}

TEST(HalfspaceMax, TiesPreferSmallestId) {
  std::vector<WeightedPoint> pts{{{ratio(1, 10), 0, -10}, 5, 3}, {{ratio(2, 10), 0, -20}, 5, 1}, {{ratio(3, 10), 0, -5}, 2, 0}};
  auto T = build_weighted_tree(pts);
  EXPECT_EQ(query_max(T, flat(0)).id, std::optional<int>(1));
}

TEST(HalfspaceMax, RandomMatchesOracle) {
  for (std::uint64_t seed : {2, 3}) {
    Rng rng(seed);
    auto pts = random_weighted_points(rng, 500, 100);
    LeisConfig base;
    if (seed == 3) {  // small x so that the upper tree levels are heavy
      base.x = 100;
      base.ell = 1;
    }
    auto T = build_weighted_tree(pts, base);
    auto P = coords(pts);
    for (int i = 0; i < 200; ++i) {
      auto h = random_halfspace(rng, P, std::uniform_int_distribution<std::size_t>(0, 100)(rng), default_box());
      auto r = query_max(T, h);
      ASSERT_EQ(r.id, max_oracle(pts, h));
      if (r.id) EXPECT_EQ(r.descent, T.tree.height);
    }
  }
}

TEST(WeightedReport, Trivial) {
  Rng rng(4);
  auto pts = random_weighted_points(rng, 60, 1000);
  auto T = build_weighted_tree(pts);
  auto all = query_weighted_report(T, flat(999), -1, 2000);
  EXPECT_EQ(all.ids.size(), pts.size());
  // Weights are integers: nothing lies strictly between two adjacent ones.
  Scalar w = T.points[10].w;
  EXPECT_TRUE(query_weighted_report(T, flat(999), w + ratio(1, 3), w + ratio(2, 3)).ids.empty());
  EXPECT_THROW(query_weighted_report(T, flat(0), 5, 4), std::invalid_argument);
}

TEST(WeightedReport, CanonicalDecomposition) {
  for (bool pad : {false, true}) {
    RangeTree T(37, pad);
    for (std::size_t lo = 0; lo <= 37; lo += 3)
      for (std::size_t hi = lo; hi <= 37; hi += 5) {
        std::vector<std::size_t> covered;
        for (int v : T.canonical(lo, hi))
          for (std::size_t i = T.nodes[v].lo; i < T.nodes[v].hi; ++i) covered.push_back(i);
        std::vector<std::size_t> want(hi - lo);
        std::iota(want.begin(), want.end(), lo);
        EXPECT_EQ(covered, want);
        EXPECT_LE(T.canonical(lo, hi).size(), 2 * T.height + 1);
      }
  }
}

TEST(WeightedReport, RandomMatchesOracle) {
  for (std::uint64_t seed : {5, 6}) {
    Rng rng(seed);
    auto pts = random_weighted_points(rng, 500, 100);
    LeisConfig base;
    if (seed == 6) {
      base.x = 100;
      base.ell = 1;
    }
    auto T = build_weighted_tree(pts, base);
    auto P = coords(pts);
    for (int i = 0; i < 200; ++i) {
      auto h = random_halfspace(rng, P, std::uniform_int_distribution<std::size_t>(0, 200)(rng), default_box());
      long a = std::uniform_int_distribution<long>(-5, 100)(rng), b = a + std::uniform_int_distribution<long>(0, 80)(rng);
      auto r = query_weighted_report(T, h, a, b);
      ASSERT_EQ(r.ids, report_oracle(pts, h, a, b));
    }
  }
}

TEST(ColoredReport, Trivial) {
  std::vector<ColoredPoint> pts;
  for (int c = 0; c < 8; ++c) pts.push_back({{ratio(c, 10), ratio(c, 20), c == 2 || c == 5 ? -50 + c : 50 + c}, c, c});
  auto C = build_colored(pts, 8);
  for (auto v : {ColorVariant::Path, ColorVariant::Tree}) {
    EXPECT_TRUE(query_colors(C, flat(-999), v).colors.empty());
    EXPECT_EQ(query_colors(C, flat(0), v).colors, (std::vector<int>{2, 5}));
  }
}

TEST(ColoredReport, RandomMatchesOracle) {
  Rng rng(7);
  const std::size_t m = 32;
  auto pts = random_colored_points(rng, 1000, m);
  auto C = build_colored(pts, m);
  auto P = coords(pts);
  for (int i = 0; i < 200; ++i) {
    auto h = random_halfspace(rng, P, std::uniform_int_distribution<std::size_t>(0, 60)(rng), default_box());
    auto want = color_oracle(pts, h);
    auto a = query_colors(C, h, ColorVariant::Path);
    ASSERT_EQ(a.colors, want);
    EXPECT_EQ(a.walk_length, m);
    auto b = query_colors(C, h, ColorVariant::Tree);
    ASSERT_EQ(b.colors, want);
    EXPECT_LE(static_cast<double>(b.visited), colored_visit_bound(want.size(), m));
  }
}
