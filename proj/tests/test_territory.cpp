#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "battleflow/errors.hpp"
#include "battleflow/territory.hpp"
#include "support.hpp"

using namespace battleflow;
using battleflow::testing::Gen;

namespace {

UnitTrack track_from(std::vector<Vec2> pts, double dt = 1.0) {
  UnitTrack u{"u", 1, {}};
  for (std::size_t i = 0; i < pts.size(); ++i) u.samples.push_back({static_cast<double>(i) * dt, pts[i]});
  return u;
}

// Independent rescan: classify every sample by the three predicates, then
// order the per-unit output by time.
std::vector<Vec2> rescan_points(const UnitTrack& u, const CharacteristicPointParams& p) {
  const auto& s = u.samples;
  const std::size_t n = s.size();
  std::vector<std::pair<double, Vec2>> found;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 a = s[i].pos - s[i - 1].pos, b = s[i + 1].pos - s[i].pos;
    if (norm(a) == 0 || norm(b) == 0) continue;
    const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
    if (std::acos(c) * 180.0 / std::numbers::pi > p.turn_angle_deg) found.push_back({s[i].t, s[i].pos});
  }
  // Label each segment slow/fast, then walk maximal slow runs.
  std::vector<bool> slow(n > 0 ? n - 1 : 0);
  for (std::size_t k = 0; k + 1 < n; ++k) slow[k] = dist(s[k].pos, s[k + 1].pos) < p.stop_speed * (s[k + 1].t - s[k].t);
  std::size_t k = 0;
  while (k < slow.size()) {
    if (!slow[k]) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j < slow.size() && slow[j]) ++j;
    // segments [k, j) -> samples k..j
    if (s[j].t - s[k].t >= p.stop_min_duration) {
      Vec2 m{};
      for (std::size_t q = k; q <= j; ++q) m += s[q].pos;
      found.push_back({(s[k].t + s[j].t) / 2, m / static_cast<double>(j - k + 1)});
    }
    k = j;
  }
  std::stable_sort(found.begin(), found.end(), [](auto& x, auto& y) { return x.first < y.first; });
  std::vector<Vec2> out{s.front().pos};
  for (auto& f : found) out.push_back(f.second);
  out.push_back(s.back().pos);
  return out;
}

// Headings chosen so that no turn lies near the 30 degree threshold and no
// speed near the stop threshold.
UnitTrack random_polyline(Gen& g) {
  std::vector<Vec2> pts{g.point({0, 0, 100, 100})};
  double heading = g.real(0, 2 * std::numbers::pi);
  const int n = g.integer(2, 60);
  for (int i = 1; i < n; ++i) {
    const double r = g.real(0, 1);
    double step = g.real(1.0, 3.0);
    if (r < 0.2) {
      heading += (g.chance(0.5) ? 1 : -1) * g.real(45, 170) * std::numbers::pi / 180;
    } else if (r < 0.45) {
      step = g.real(0.0, 0.2);
    } else {
      heading += g.real(-10, 10) * std::numbers::pi / 180;
    }
    pts.push_back(pts.back() + step * Vec2{std::cos(heading), std::sin(heading)});
  }
  return track_from(pts);
}

LandmarkId brute_nearest(const Territory& t, Vec2 p) {
  LandmarkId best = 0;
  for (const Landmark& l : t.landmarks()) {
    const double d = dist2(p, l.site), bd = dist2(p, t.landmark(best).site);
    if (d < bd) best = l.id;
  }
  return best;
}

}  // namespace

TEST(CharacteristicPoints, StraightLineGivesEndpoints) {
  std::vector<Vec2> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({2.0 * i, 1.0});
  const UnitTrack u = track_from(pts);
  const auto out = extract_characteristic_points(std::span(&u, 1));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], pts.front());
  EXPECT_EQ(out[1], pts.back());
}

TEST(CharacteristicPoints, RightAngleTurnAddsOnePoint) {
  const UnitTrack u = track_from({{0, 0}, {2, 0}, {4, 0}, {4, 2}, {4, 4}});
  const auto out = extract_characteristic_points(std::span(&u, 1));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[1], (Vec2{4, 0}));
}

TEST(CharacteristicPoints, StopCentreIsDetected) {
  std::vector<Vec2> pts{{0, 0}, {5, 0}, {10, 0}};
  for (int i = 0; i < 8; ++i) pts.push_back({10.0 + 0.01 * i, 0});
  pts.push_back({20, 0});
  const UnitTrack u = track_from(pts);
  const auto out = extract_characteristic_points(std::span(&u, 1));
  ASSERT_EQ(out.size(), 3u);
  EXPECT_NEAR(out[1].x, 10.0 + 0.01 * 28 / 9, 1e-12);  // mean of samples 2..10
}

TEST(CharacteristicPoints, DegenerateWhenNobodyMoves) {
  const UnitTrack u = track_from({{1, 1}});
  EXPECT_THROW(extract_characteristic_points(std::span(&u, 1)), DegenerateInput);
}

TEST(CharacteristicPoints, MatchesRescanOracle) {
  Gen g(31);
  const CharacteristicPointParams params;
  for (int trial = 0; trial < 300; ++trial) {
    const UnitTrack u = random_polyline(g);
    const auto got = extract_characteristic_points(std::span(&u, 1), params);
    const auto want = rescan_points(u, params);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got[i].x, want[i].x, 1e-9);
      EXPECT_NEAR(got[i].y, want[i].y, 1e-9);
    }
  }
}

TEST(ClusterPoints, NearPointsMerge) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}};
  const auto c = cluster_points(pts, 5.0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (Vec2{0.5, 0}));
}

TEST(ClusterPoints, FarPointsStaySeparate) {
  const std::vector<Vec2> pts{{20, 0}, {0, 0}};
  const auto c = cluster_points(pts, 5.0);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (Vec2{0, 0}));
  EXPECT_EQ(c[1], (Vec2{20, 0}));
}

TEST(ClusterPoints, EveryPointWithinTwiceRadius) {
  Gen g(32);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 200; ++i) pts.push_back(g.point({0, 0, 100, 100}));
    const double r = g.real(2, 20);
    const auto c = cluster_points(pts, r);
    for (Vec2 p : pts) {
      double best = INFINITY;
      for (Vec2 q : c) best = std::min(best, dist(p, q));
      EXPECT_LE(best, 2 * r);
    }
  }
}

TEST(Territory, SingleSeedOwnsTheMap) {
  const std::vector<Vec2> seeds{{30, 40}};
  const Territory t = build_territory(seeds, {0, 0, 100, 100});
  ASSERT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ(signed_area(t.landmark(0).cell), 10000.0);
  EXPECT_EQ(t.locate({99, 1}), 0);
}

TEST(Territory, TwoSeedsSplitAtBisector) {
  const std::vector<Vec2> seeds{{75, 50}, {25, 50}};
  const Territory t = build_territory(seeds, {0, 0, 100, 100});
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.landmark(0).site, (Vec2{25, 50}));
  for (Vec2 v : t.landmark(0).cell) EXPECT_LE(v.x, 50.0);
  for (Vec2 v : t.landmark(1).cell) EXPECT_GE(v.x, 50.0);
  EXPECT_DOUBLE_EQ(signed_area(t.landmark(0).cell), 5000.0);
  EXPECT_EQ(t.locate({50, 10}), 0);  // equidistant: lower id
  EXPECT_EQ(t.locate({50.000001, 10}), 1);
}

TEST(Territory, DegenerateAndOutOfBoundsSeeds) {
  const Rect b{0, 0, 10, 10};
  EXPECT_THROW(build_territory(std::vector<Vec2>{}, b), DegenerateInput);
  EXPECT_THROW(build_territory(std::vector<Vec2>{{1, 1}, {1, 1}, {1, 1 + 1e-12}}, b), DegenerateInput);
  EXPECT_THROW(build_territory(std::vector<Vec2>{{11, 1}}, b), OutOfBounds);
  const Territory t = build_territory(std::vector<Vec2>{{1, 1}, {1, 1}, {5, 5}}, b);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_THROW(t.locate({-1, 5}), OutOfBounds);
}

TEST(Territory, CentroidsLocateToThemselves) {
  Gen g(33);
  std::vector<Vec2> seeds;
  for (int i = 0; i < 60; ++i) seeds.push_back(g.point({0, 0, 300, 200}));
  const Territory t = build_territory(seeds, {0, 0, 300, 200});
  for (const Landmark& l : t.landmarks()) {
    EXPECT_EQ(t.locate(l.centroid), l.id);
    EXPECT_TRUE(point_in_convex(l.cell, l.centroid, 1e-9));
  }
}

TEST(Territory, LocateMatchesBruteForce) {
  Gen g(34);
  for (int map = 0; map < 5; ++map) {
    const Rect b{0, 0, g.real(50, 1000), g.real(50, 1000)};
    std::vector<Vec2> seeds;
    for (int i = 0; i < 50; ++i) seeds.push_back(g.point(b));
    const Territory t = build_territory(seeds, b);
    for (int q = 0; q < 10000; ++q) {
      const Vec2 p = g.point(b);
      ASSERT_EQ(t.locate(p), brute_nearest(t, p));
    }
  }
}

TEST(Territory, LocateOnClusteredSeeds) {
  // Seeds packed in one corner stress the grid ring search.
  Gen g(35);
  std::vector<Vec2> seeds;
  for (int i = 0; i < 40; ++i) seeds.push_back(g.point({0, 0, 5, 5}));
  seeds.push_back({999, 999});
  const Rect b{0, 0, 1000, 1000};
  const Territory t = build_territory(seeds, b);
  for (int q = 0; q < 5000; ++q) {
    const Vec2 p = g.point(b);
    ASSERT_EQ(t.locate(p), brute_nearest(t, p));
  }
}

TEST(Territory, CellsTileTheMap) {
  Gen g(36);
  const Rect b{-50, 0, 150, 80};
  std::vector<Vec2> seeds;
  for (int i = 0; i < 45; ++i) seeds.push_back(g.point(b));
  const Territory t = build_territory(seeds, b);
  double area = 0;
  for (const Landmark& l : t.landmarks()) {
    EXPECT_GT(signed_area(l.cell), 0.0);
    area += signed_area(l.cell);
  }
  EXPECT_NEAR(area, b.width() * b.height(), 1e-6);
  for (int q = 0; q < 10000; ++q) {
    const Vec2 p = g.point(b);
    int inside = 0;
    for (const Landmark& l : t.landmarks()) inside += point_in_convex(l.cell, p, -1e-7) ? 1 : 0;
    EXPECT_LE(inside, 1);
    EXPECT_TRUE(point_in_convex(t.landmark(t.locate(p)).cell, p, 1e-6));
  }
}

TEST(Territory, BuildIsDeterministic) {
  Gen g(37);
  std::vector<Vec2> seeds;
  for (int i = 0; i < 30; ++i) seeds.push_back(g.point({0, 0, 10, 10}));
  const Territory a = build_territory(seeds, {0, 0, 10, 10});
  std::reverse(seeds.begin(), seeds.end());
  const Territory b = build_territory(seeds, {0, 0, 10, 10});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.landmarks()[i].site, b.landmarks()[i].site);
    EXPECT_EQ(a.landmarks()[i].cell, b.landmarks()[i].cell);
  }
}
