// Copyright 2026 The RubbleNav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rubblenav/local_planner.hpp"

using namespace rubblenav;

namespace
{

PlanResult plan(const CategoryMask & c, Cell start, Cell dest, const APFParams & p = {})
{
  return plan_trajectory(c, to_point(start), dest, build_fields(c, dest), p);
}

void expect_safe(const CategoryMask & c, const Trajectory & t, double max_gap)
{
  ASSERT_GE(t.points.size(), 2u);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    ASSERT_TRUE(is_traversable(c, to_cell(t.points[i]))) << "point " << i;
    if (i > 0) {
      ASSERT_LE(norm(t.points[i] - t.points[i - 1]), max_gap + 1e-12) << "gap at " << i;
    }
  }
}

CategoryMask corridor(int w, int h, int left, int right)
{
  CategoryMask c(w, h, Category::kTraversable);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x < left || x > right) {
        c.at(x, y) = Category::kObstacle;
      }
    }
  }
  return c;
}

}  // namespace

TEST(Params, DefaultsValidateAndBadValuesThrow)
{
  APFParams p;
  EXPECT_NO_THROW(p.validate());
  p.goal_eps = 9.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.stuck_window = 1;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.k_rep = 0.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Destination, UniformFreeMaskIsTopCenter)
{
  const CategoryMask c(40, 30, Category::kTraversable);
  const auto d = find_local_destination(c, {});
  ASSERT_TRUE(d);
  EXPECT_EQ(*d, (Cell{20, 0}));
}

TEST(Destination, StopsBelowFullWall)
{
  CategoryMask c(40, 30, Category::kTraversable);
  for (int x = 0; x < 40; ++x) {
    c.at(x, 12) = Category::kObstacle;
  }
  for (int x = 0; x < 8; ++x) {
    c.at(x, 13) = Category::kObstacle;
  }
  const auto d = find_local_destination(c, {});
  ASSERT_TRUE(d);
  EXPECT_EQ(d->y, 13);
  EXPECT_EQ(d->x, 8 + 32 / 2);
}

TEST(Destination, BottomRowBlockedIsNone)
{
  CategoryMask c(40, 30, Category::kTraversable);
  for (int x = 0; x < 40; ++x) {
    c.at(x, 29) = Category::kObstacle;
  }
  EXPECT_FALSE(find_local_destination(c, {}));
  EXPECT_FALSE(find_start_cell(c, {}));
}

TEST(Destination, NarrowGapDoesNotQualifyAndTiesGoLeft)
{
  // Two equal runs of 12 on the top row; leftmost wins.
  CategoryMask c(30, 4, Category::kTraversable);
  for (int x = 12; x < 18; ++x) {
    c.at(x, 0) = Category::kObstacle;
  }
  auto d = find_local_destination(c, {});
  ASSERT_TRUE(d);
  EXPECT_EQ(*d, (Cell{6, 0}));
  // A 9-cell gap is narrower than the vehicle.
  for (int x = 0; x < 30; ++x) {
    c.at(x, 2) = (x >= 10 && x < 19) ? Category::kTraversable : Category::kObstacle;
  }
  d = find_local_destination(c, {});
  ASSERT_TRUE(d);
  EXPECT_EQ(d->y, 3);
}

TEST(Destination, MatchesRowScanOracle)
{
  Rng rng(41);
  APFParams p;
  p.vehicle_width = 4;
  for (int trial = 0; trial < 200; ++trial) {
    const CategoryMask c = oracle::random_categories(rng, 24, 16, rng.uniform(0, 0.25));
    ASSERT_EQ(find_local_destination(c, p), oracle::row_scan(c, 4)) << trial;
  }
}

TEST(StartCell, NearestQualifyingCellToCenter)
{
  CategoryMask c(40, 5, Category::kObstacle);
  for (int x = 24; x < 36; ++x) {
    c.at(x, 4) = Category::kTraversable;
  }
  const auto s = find_start_cell(c, {});
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, (Cell{24, 4}));
}

TEST(Attractive, HandValues)
{
  EXPECT_EQ(attractive_force({3, 4}, {3, 4}, 1.0), (ForceVector{0.0, 0.0}));
  const ForceVector f = attractive_force({10, 10}, {10, 0}, 0.5);
  EXPECT_EQ(f.fx, 0.0);
  EXPECT_EQ(f.fy, -5.0);
  const ForceVector a = attractive_force({1.5, -2}, {7, 3.25}, 1.7);
  const ForceVector b = attractive_force({7, 3.25}, {1.5, -2}, 1.7);
  EXPECT_EQ(a.fx, -b.fx);
  EXPECT_EQ(a.fy, -b.fy);
}

TEST(Repulsive, ZeroWhenEveryProbeIsFar)
{
  CategoryMask c(60, 60, Category::kTraversable);
  c.at(0, 0) = Category::kObstacle;
  const DistanceField d = brushfire(c);
  EXPECT_EQ(repulsive_force({40, 40}, d, {}), (ForceVector{0.0, 0.0}));
  const DistanceField none = brushfire(CategoryMask(20, 20, Category::kTraversable));
  EXPECT_EQ(repulsive_force({10, 10}, none, {}), (ForceVector{0.0, 0.0}));
}

TEST(Repulsive, SingleObstacleOnPlusX)
{
  // d0 = 4 and probe radius 8: only the +x probe (two cells short of the
  // obstacle) is inside the influence distance.
  CategoryMask c(40, 40, Category::kTraversable);
  c.at(30, 20) = Category::kObstacle;
  APFParams p;
  p.d0 = 4;
  p.goal_eps = 1;
  const ForceVector f = repulsive_force({20, 20}, brushfire(c), p);
  // 100 * (1/2 - 1/4) / 2^2
  EXPECT_DOUBLE_EQ(f.fx, -6.25);
  EXPECT_EQ(f.fy, 0.0);
}

TEST(Repulsive, ProbeOnObstacleUsesHalfCell)
{
  CategoryMask c(40, 40, Category::kTraversable);
  c.at(28, 20) = Category::kObstacle;
  APFParams p;
  p.d0 = 4;
  p.goal_eps = 1;
  const ForceVector f = repulsive_force({20, 20}, brushfire(c), p);
  EXPECT_DOUBLE_EQ(f.fx, -100.0 * (2.0 - 0.25) * 4.0);
  EXPECT_EQ(f.fy, 0.0);
}

TEST(Repulsive, MirrorSymmetricObstaclesCancelInX)
{
  CategoryMask c(41, 41, Category::kTraversable);
  c.at(14, 18) = Category::kObstacle;
  c.at(26, 18) = Category::kObstacle;
  c.at(17, 25) = Category::kObstacle;
  c.at(23, 25) = Category::kObstacle;
  const ForceVector f = repulsive_force({20, 20}, brushfire(c), {});
  EXPECT_EQ(f.fx, 0.0);
  EXPECT_NE(f.fy, 0.0);
}

TEST(Forces, MatchClosedFormAtRandomConfigurations)
{
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const CategoryMask c = oracle::random_categories(rng, 50, 40, 0.03);
    const DistanceField d = brushfire(c);
    APFParams p;
    p.k_att = rng.uniform(0.1, 3);
    p.k_rep = rng.uniform(10, 500);
    p.d0 = rng.uniform(3, 12);
    p.probe_radius = rng.uniform(2, 12);
    const Point2 q{rng.uniform(0, 49), rng.uniform(0, 39)};
    const Point2 g{rng.uniform(0, 49), rng.uniform(0, 39)};
    const auto att = oracle::attractive(q, g, p.k_att);
    const auto rep = oracle::repulsive(q, d, p.k_rep, p.d0, p.probe_radius);
    const ForceVector fa = attractive_force(q, g, p.k_att);
    const ForceVector fr = repulsive_force(q, d, p);
    const ForceVector fn = net_force(q, g, d, p);
    const double scale = 1.0 + std::abs(rep.fx) + std::abs(rep.fy);
    EXPECT_NEAR(fa.fx, att.fx, 1e-12);
    EXPECT_NEAR(fa.fy, att.fy, 1e-12);
    EXPECT_NEAR(fr.fx, rep.fx, 1e-12 * scale);
    EXPECT_NEAR(fr.fy, rep.fy, 1e-12 * scale);
    EXPECT_NEAR(fn.fx, fa.fx + fr.fx, 1e-12 * scale);
    EXPECT_NEAR(fn.fy, fa.fy + fr.fy, 1e-12 * scale);
  }
}

TEST(Forces, NetEqualsAttractionWithoutObstaclesAndZeroAtGoal)
{
  const DistanceField d = brushfire(CategoryMask(20, 20, Category::kTraversable));
  const ForceVector f = net_force({3, 17}, {10, 2}, d, {});
  EXPECT_EQ(f, attractive_force({3, 17}, {10, 2}, 1.0));
  EXPECT_EQ(net_force({10, 2}, {10, 2}, d, {}), (ForceVector{0.0, 0.0}));
}

TEST(Forces, FiniteEverywhere)
{
  Rng rng(43);
  const CategoryMask c = oracle::random_categories(rng, 30, 30, 0.2);
  const DistanceField d = brushfire(c);
  const GradientField g = gradient_map(d);
  for (double y = 0; y <= 29; y += 0.5) {
    for (double x = 0; x <= 29; x += 0.5) {
      const ForceVector f = net_force({x, y}, {15, 0}, d, {});
      const ForceVector a = alternative_repulsive({x, y}, d, g, {});
      ASSERT_TRUE(std::isfinite(f.fx) && std::isfinite(f.fy));
      ASSERT_TRUE(std::isfinite(a.fx) && std::isfinite(a.fy));
    }
  }
}

TEST(Forces, GainScalingScalesExactly)
{
  Rng rng(44);
  const CategoryMask c = oracle::random_categories(rng, 40, 40, 0.05);
  const DistanceField d = brushfire(c);
  for (int trial = 0; trial < 50; ++trial) {
    const Point2 q{rng.uniform(0, 39), rng.uniform(0, 39)};
    APFParams p;
    APFParams s = p;
    s.k_att *= 4.0;
    s.k_rep *= 4.0;
    const ForceVector a = net_force(q, {20, 0}, d, p);
    const ForceVector b = net_force(q, {20, 0}, d, s);
    EXPECT_EQ(b.fx, 4.0 * a.fx);
    EXPECT_EQ(b.fy, 4.0 * a.fy);
  }
}

TEST(Forces, RepulsionIsLocal)
{
  Rng rng(45);
  APFParams p;
  const int reach = static_cast<int>(p.d0 + p.probe_radius) + 1;
  for (int trial = 0; trial < 100; ++trial) {
    CategoryMask c = oracle::random_categories(rng, 64, 64, 0.04);
    const Point2 q{rng.uniform(0, 63), rng.uniform(0, 63)};
    const ForceVector before = repulsive_force(q, brushfire(c), p);
    for (int k = 0; k < 5; ++k) {
      const Cell e{rng.uniform_int(0, 63), rng.uniform_int(0, 63)};
      const Cell qc = to_cell(q);
      if (std::max(std::abs(e.x - qc.x), std::abs(e.y - qc.y)) > reach) {
        c.at(e) = c.at(e) == Category::kObstacle ? Category::kTraversable : Category::kObstacle;
      }
    }
    const ForceVector after = repulsive_force(q, brushfire(c), p);
    ASSERT_EQ(before, after) << trial;
  }
}

TEST(Alternative, PushesAwayFromNearestObstacle)
{
  CategoryMask c(9, 9, Category::kTraversable);
  c.at(4, 3) = Category::kObstacle;   // directly above the center
  const DistanceField d = brushfire(c);
  const GradientField g = gradient_map(d);
  ASSERT_EQ(g.at(4, 4), 2);
  const ForceVector f = alternative_repulsive({4, 4}, d, g, {});
  EXPECT_EQ(f.fx, 0.0);
  EXPECT_EQ(f.fy, 100.0);   // +y in the mask is 270 degrees
}

TEST(Alternative, ZeroOnPlateau)
{
  const DistanceField d = brushfire(CategoryMask(9, 9, Category::kTraversable));
  EXPECT_EQ(alternative_repulsive({4, 4}, d, gradient_map(d), {}), (ForceVector{0.0, 0.0}));
}

TEST(Alternative, TriggeredWhenTooCloseOrOnEquidistantFlanks)
{
  APFParams p;
  p.d0 = 4;
  p.goal_eps = 1;
  p.probe_radius = 3;
  // Obstacles due west and due north of (4,4), both exactly under a probe.
  CategoryMask c(9, 9, Category::kTraversable);
  c.at(1, 4) = Category::kObstacle;
  c.at(4, 1) = Category::kObstacle;
  const DistanceField d = brushfire(c);
  const GradientField g = gradient_map(d);
  const auto probes = probe_distances({4, 4}, d, p);
  EXPECT_EQ(probes[2].dist, 0);
  EXPECT_EQ(probes[4].dist, 0);
  EXPECT_TRUE(needs_alternative({4, 4}, d, p));
  // Hand-derived: neighbours with codes 1 through 5 all sit at distance 2,
  // code 1 wins, so the push is down-left at full k_rep.
  EXPECT_EQ(g.at(4, 4), 1);
  const ForceVector f = alternative_repulsive({4, 4}, d, g, p);
  EXPECT_DOUBLE_EQ(f.fx, -100.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(f.fy, 100.0 / std::sqrt(2.0));
  // Plain repulsion at the same spot points down-right, away from both.
  const ForceVector r = repulsive_force({4, 4}, d, p);
  EXPECT_GT(r.fx, 0.0);
  EXPECT_GT(r.fy, 0.0);
  EXPECT_DOUBLE_EQ(r.fx, r.fy);

  // Too close: distance 1 < too_close.
  EXPECT_TRUE(needs_alternative({2, 4}, d, p));
}

TEST(Alternative, OpposedFlanksCancelAndDoNotTrigger)
{
  APFParams p;
  p.d0 = 4;
  p.goal_eps = 1;
  p.probe_radius = 3;
  CategoryMask c(9, 9, Category::kTraversable);
  c.at(1, 4) = Category::kObstacle;
  c.at(7, 4) = Category::kObstacle;
  const DistanceField d = brushfire(c);
  EXPECT_FALSE(needs_alternative({4, 4}, d, p));
  EXPECT_EQ(repulsive_force({4, 4}, d, p).fx, 0.0);
}

TEST(Plan, EmptyMaskIsStraightVertical)
{
  const CategoryMask c(30, 40, Category::kTraversable);
  const PlanResult r = plan(c, {15, 39}, {15, 0});
  EXPECT_FALSE(r.fallback_used);
  expect_safe(c, r.trajectory, 2.0);
  for (const auto & p : r.trajectory.points) {
    EXPECT_EQ(p.x, 15.0);
  }
  EXPECT_EQ(r.trajectory.points.front(), (Point2{15, 39}));
  EXPECT_EQ(r.trajectory.points.back(), (Point2{15, 0}));
}

TEST(Plan, SymmetricCorridorStaysOnCenterline)
{
  const CategoryMask c = corridor(41, 80, 12, 28);
  const PlanResult r = plan(c, {20, 79}, {20, 0});
  expect_safe(c, r.trajectory, 2.0);
  for (const auto & p : r.trajectory.points) {
    EXPECT_LE(std::abs(p.x - 20.0), 0.5);
  }
  EXPECT_LE(norm(r.trajectory.points.back() - Point2{20, 0}), 1e-12);
}

TEST(Plan, UTrapFallsBackToWavefront)
{
  // A cup open towards the bottom sits between start and goal.
  CategoryMask c(41, 50, Category::kTraversable);
  for (int x = 8; x <= 32; ++x) {
    c.at(x, 15) = Category::kObstacle;
  }
  for (int y = 15; y <= 35; ++y) {
    c.at(8, y) = Category::kObstacle;
    c.at(32, y) = Category::kObstacle;
  }
  const Cell dest{20, 2};
  const PlanningFields fields = build_fields(c, dest);
  APFParams p;
  const PlanResult r = plan_trajectory(c, {20, 30}, dest, fields, p);
  EXPECT_TRUE(r.fallback_used);
  expect_safe(c, r.trajectory, 2.0);
  EXPECT_EQ(r.trajectory.points.back(), to_point(dest));
  // Tail after the hand-over: integer cells with strictly falling hop counts.
  const auto & pts = r.trajectory.points;
  std::size_t tail = pts.size() - 1;
  while (tail > 0 && fields.hops.at(to_cell(pts[tail - 1])) == fields.hops.at(to_cell(pts[tail])) + 1 &&
    to_point(to_cell(pts[tail - 1])) == pts[tail - 1])
  {
    --tail;
  }
  const int tail_hops = fields.hops.at(to_cell(pts[tail]));
  EXPECT_EQ(static_cast<int>(pts.size() - 1 - tail), tail_hops);
  EXPECT_GT(tail_hops, 10);
  EXPECT_LE(static_cast<int>(pts.size()) - 1, p.max_iters + tail_hops + 1);
}

TEST(Plan, UnreachableDestinationIsNoPath)
{
  CategoryMask c(20, 20, Category::kTraversable);
  for (int x = 0; x < 20; ++x) {
    c.at(x, 10) = Category::kObstacle;
  }
  try {
    plan(c, {10, 19}, {10, 0});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPath);
  }
}

TEST(Plan, RandomMasksAlwaysSafeAndTerminate)
{
  Rng rng(46);
  int planned = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const CategoryMask c = oracle::random_categories(rng, 60, 60, rng.uniform(0.0, 0.3), 0.01);
    const Cell start{rng.uniform_int(0, 59), rng.uniform_int(40, 59)};
    const Cell dest{rng.uniform_int(0, 59), rng.uniform_int(0, 20)};
    if (!is_traversable(c, start) || !is_traversable(c, dest)) {
      continue;
    }
    const PlanningFields f = build_fields(c, dest);
    if (f.hops.at(start) == kUnreachable) {
      EXPECT_THROW(plan_trajectory(c, to_point(start), dest, f, {}), Error);
      continue;
    }
    const PlanResult r = plan_trajectory(c, to_point(start), dest, f, {});
    expect_safe(c, r.trajectory, 2.0);
    EXPECT_LE(norm(r.trajectory.points.back() - to_point(dest)), 2.0);
    const Trajectory s = smooth_bezier(r.trajectory, c, 2.0);
    expect_safe(c, s, 2.0);
    ++planned;
  }
  EXPECT_GT(planned, 30);
}

TEST(Plan, GainScalingGivesIdenticalTrajectory)
{
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const CategoryMask c = oracle::random_categories(rng, 50, 50, 0.04);
    const Cell start{25, 49};
    const Cell dest{25, 0};
    if (!is_traversable(c, start) || !is_traversable(c, dest)) {
      continue;
    }
    const PlanningFields f = build_fields(c, dest);
    if (f.hops.at(start) == kUnreachable) {
      continue;
    }
    APFParams p;
    APFParams s = p;
    s.k_att *= 2.0;
    s.k_rep *= 2.0;
    const auto a = plan_trajectory(c, to_point(start), dest, f, p).trajectory.points;
    const auto b = plan_trajectory(c, to_point(start), dest, f, s).trajectory.points;
    ASSERT_EQ(a, b) << trial;
  }
}

TEST(Bezier, CollinearStaysCollinearAndEndpointsExact)
{
  const CategoryMask c(50, 50, Category::kTraversable);
  Trajectory t;
  for (int i = 0; i < 30; ++i) {
    t.points.push_back({10.0 + i, 40.0 - i});
  }
  const Trajectory s = smooth_bezier(t, c, 2.0);
  ASSERT_TRUE(s.smoothed);
  ASSERT_EQ(s.points.size(), t.points.size());
  EXPECT_EQ(s.points.front(), t.points.front());
  EXPECT_EQ(s.points.back(), t.points.back());
  for (const auto & p : s.points) {
    EXPECT_NEAR(p.x + p.y, 50.0, 1e-9);
  }
}

TEST(Bezier, ZigZagTurnsLess)
{
  const CategoryMask c(60, 60, Category::kTraversable);
  Trajectory t;
  for (int i = 0; i < 40; ++i) {
    t.points.push_back({30.0 + ((i % 2) ? 1.0 : -1.0), 55.0 - i});
  }
  const Trajectory s = smooth_bezier(t, c, 2.0);
  ASSERT_TRUE(s.smoothed);
  EXPECT_EQ(s.points.front(), t.points.front());
  EXPECT_EQ(s.points.back(), t.points.back());
  EXPECT_LT(oracle::total_turning(s.points), oracle::total_turning(t.points));
}

TEST(Bezier, ShortOrUnsafeInputReturnedUnchanged)
{
  const CategoryMask free(20, 20, Category::kTraversable);
  Trajectory three;
  three.points = {{1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(smooth_bezier(three, free, 2.0).points, three.points);
  EXPECT_FALSE(smooth_bezier(three, free, 2.0).smoothed);

  // L-shaped path around an obstacle block; the chord would cut the corner.
  CategoryMask c(20, 20, Category::kTraversable);
  for (int y = 0; y < 15; ++y) {
    for (int x = 5; x < 20; ++x) {
      c.at(x, y) = Category::kObstacle;
    }
  }
  Trajectory l;
  for (int y = 2; y <= 17; ++y) {
    l.points.push_back({2, static_cast<double>(y)});
  }
  for (int x = 3; x <= 18; ++x) {
    l.points.push_back({static_cast<double>(x), 17});
  }
  const Trajectory s = smooth_bezier(l, c, 2.0);
  EXPECT_FALSE(s.smoothed);
  EXPECT_EQ(s.points, l.points);
}

TEST(TrajectoryJson, RoundTrip)
{
  Trajectory t;
  t.points = {{1.5, 2.25}, {3, 4}};
  t.smoothed = true;
  const TrajectoryFile f = parse_trajectory_json(trajectory_to_json(t, true));
  EXPECT_EQ(f.trajectory.points, t.points);
  EXPECT_TRUE(f.trajectory.smoothed);
  EXPECT_TRUE(f.fallback_used);
  EXPECT_THROW(parse_trajectory_json("{}"), Error);
}
