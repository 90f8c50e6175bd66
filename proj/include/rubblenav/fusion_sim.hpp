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

#ifndef RUBBLENAV__FUSION_SIM_HPP_
#define RUBBLENAV__FUSION_SIM_HPP_

#include <numbers>
#include <string>
#include <vector>

#include "rubblenav/local_planner.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Heading in radians, measured counter-clockwise as drawn: 0 is +x and
/// pi/2 points to the top of the mask.
struct Pose
{
  double x{0.0};
  double y{0.0};
  double heading{std::numbers::pi / 2};
};

inline Point2 heading_vector(double angle) {return {std::cos(angle), -std::sin(angle)};}

/// Wraps to (-pi, pi].
double wrap_angle(double a);

struct LidarConfig
{
  int n_beams{181};
  double fov{std::numbers::pi};
  double max_range{60.0};
};

struct LidarScan
{
  Pose pose;
  int n_beams{0};
  double fov{0.0};
  double max_range{0.0};
  std::vector<double> ranges;

  /// Beam j sits at the center of the j-th of n equal slices of the fov.
  double beam_angle(int j) const;
};

/// Marches each beam in 0.5-cell steps until it meets an Obstacle or
/// Undefined cell, leaves the mask, or reaches max_range.
/// Throws Error(kInvalidArgument) when the pose is not on a Traversable cell.
LidarScan simulate_lidar(
  const CategoryMask & cat, const Pose & pose, int n_beams, double fov, double max_range);

enum class SteeringSource
{
  kTrajectory,
  kLidarOverride,
  kStop,
};

std::string to_string(SteeringSource s);

struct SteeringCommand
{
  double heading{0.0};
  double speed_scale{0.0};
  SteeringSource source{SteeringSource::kStop};
};

struct FuseParams
{
  double safety_range{6.0};
  double cone{std::numbers::pi / 6};   ///< full width of the checked cone
  double goal_eps{2.0};
};

/// Follows the trajectory unless a beam inside the cone around the desired
/// heading is shorter than safety_range; then steers toward the longest beam
/// at half speed. Stops when every beam is shorter than safety_range.
SteeringCommand fuse(const Trajectory & traj, const LidarScan & scan, const FuseParams & params);

/// Obstacle cells (inclusive rectangle) that appear at simulated time t.
struct ObstacleInjection
{
  double t{0.0};
  Cell min;
  Cell max;
};

struct LoopConfig
{
  double lidar_rate{40.0};
  double mask_rate{10.0};
  double duration{1.0};
  Pose pose;
  LidarConfig lidar;
  FuseParams fuse;
};

struct LoopEvent
{
  enum class Kind
  {
    kReplan,
    kSteer,
  };

  double t{0.0};
  Kind kind{Kind::kSteer};
  SteeringCommand command;   ///< meaningful for kSteer
  bool plan_ok{false};       ///< meaningful for kReplan
  std::string note;
};

/// Two-rate loop on one simulated clock. The trajectory is replanned at
/// mask_rate on the world as it stands (base mask plus injections whose time
/// has come); every lidar tick fuses a fresh scan with the latest complete
/// trajectory and emits a steering event. Replans sort before steering at
/// equal timestamps.
std::vector<LoopEvent> run_loop(
  const CategoryMask & base, const std::vector<ObstacleInjection> & injections,
  const LoopConfig & config, const APFParams & params);

std::string event_to_json(const LoopEvent & e);

}  // namespace rubblenav

#endif  // RUBBLENAV__FUSION_SIM_HPP_
