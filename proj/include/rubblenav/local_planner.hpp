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

#ifndef RUBBLENAV__LOCAL_PLANNER_HPP_
#define RUBBLENAV__LOCAL_PLANNER_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rubblenav/common.hpp"
#include "rubblenav/grid_fields.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Potential-field planner settings. Distances are in grid cells of the
/// (condensed) category mask.
struct APFParams
{
  double k_att{1.0};
  double k_rep{100.0};
  double d0{8.0};             ///< influence distance of a probed obstacle
  double probe_radius{8.0};   ///< offset of the eight directional samples
  double step_size{1.0};
  int max_iters{1000};
  double goal_eps{2.0};
  int stuck_window{10};
  double stuck_eps{1.0};
  double too_close{2.0};
  int vehicle_width{10};

  /// Throws Error(kValidation) unless every value is positive,
  /// goal_eps < d0 and stuck_window >= 2.
  void validate() const;
};

struct ForceVector
{
  double fx{0.0};
  double fy{0.0};

  friend bool operator==(const ForceVector &, const ForceVector &) = default;
};

inline ForceVector operator+(ForceVector a, ForceVector b) {return {a.fx + b.fx, a.fy + b.fy};}
inline double magnitude(ForceVector f) {return std::hypot(f.fx, f.fy);}

struct Trajectory
{
  std::vector<Point2> points;
  bool smoothed{false};
};

/// Everything the planner reads besides the mask, built once per destination.
struct PlanningFields
{
  DistanceField dist;
  GradientField grad;
  WavefrontField hops;
};

PlanningFields build_fields(const CategoryMask & cat, Cell dest);

/// Bottom-up row scan. On each row, maximal Traversable runs at least
/// vehicle_width long qualify; the answer is the center of the longest
/// qualifying run (leftmost on ties) on the last row before a row without
/// any. std::nullopt when the bottom row already has none.
std::optional<Cell> find_local_destination(const CategoryMask & cat, const APFParams & params);

/// Vehicle position on the bottom row: the cell of a qualifying run closest
/// to the center column (left on ties). std::nullopt when none qualifies.
std::optional<Cell> find_start_cell(const CategoryMask & cat, const APFParams & params);

ForceVector attractive_force(Point2 q, Point2 goal, double k_att);

struct ProbeSample
{
  Cell cell;
  std::int32_t dist{0};
};

/// Distance-field samples at round(q + probe_radius * u_i), clamped to the grid.
std::array<ProbeSample, 8> probe_distances(
  Point2 q, const DistanceField & dist, const APFParams & params);

/// Sum over the eight probes of k_rep (1/d - 1/d0) / d^2 along -u_i.
/// Probes with d >= d0 contribute nothing; probes on an obstacle (d == 0)
/// contribute the value at d = 0.5.
ForceVector repulsive_force(Point2 q, const DistanceField & dist, const APFParams & params);

ForceVector net_force(
  Point2 q, Point2 goal, const DistanceField & dist, const APFParams & params);

/// True when the cell under q is closer than too_close to an obstacle, or
/// when two or more probes share the minimum sampled distance (< d0) and
/// their directions do not cancel out.
bool needs_alternative(Point2 q, const DistanceField & dist, const APFParams & params);

/// Force of magnitude k_rep directly away from the nearest obstacle as given
/// by the gradient map; zero where the gradient is undefined.
ForceVector alternative_repulsive(
  Point2 q, const DistanceField & dist, const GradientField & grad, const APFParams & params);

struct PlanResult
{
  Trajectory trajectory;
  bool fallback_used{false};
  int apf_steps{0};
  int alternative_steps{0};
};

/// Normalized descent on the net force from start to dest. Steps that would
/// land on a blocked or unreachable cell, a stall, or an exhausted step
/// budget hand over to strict descent on the wavefront hop counts.
/// Throws Error(kNoPath) when start cannot reach dest.
PlanResult plan_trajectory(
  const CategoryMask & cat, Point2 start, Cell dest, const PlanningFields & fields,
  const APFParams & params);

/// Cubic Bezier through the points at indices 0, n/3, 2n/3 and n-1, sampled
/// at n uniform parameter values. Returns the input unchanged when it has
/// fewer than 4 points, when a sample lands on a non-Traversable cell, or
/// when consecutive samples are more than max_spacing apart.
Trajectory smooth_bezier(const Trajectory & traj, const CategoryMask & cat, double max_spacing);

std::string trajectory_to_json(const Trajectory & traj, bool fallback_used);

struct TrajectoryFile
{
  Trajectory trajectory;
  bool fallback_used{false};
};

TrajectoryFile parse_trajectory_json(std::string_view json_text);

}  // namespace rubblenav

#endif  // RUBBLENAV__LOCAL_PLANNER_HPP_
