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

#include "rubblenav/fusion_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <json.hpp>

namespace rubblenav
{
namespace
{

constexpr double kRayStep = 0.5;

std::int64_t tick_ns(std::int64_t k, double rate)
{
  return std::llround(static_cast<double>(k) * 1e9 / rate);
}

CategoryMask world_at(
  const CategoryMask & base, const std::vector<ObstacleInjection> & injections, double t)
{
  CategoryMask world = base;
  for (const auto & inj : injections) {
    if (inj.t > t) {
      continue;
    }
    for (int y = std::max(0, inj.min.y); y <= std::min(base.height() - 1, inj.max.y); ++y) {
      for (int x = std::max(0, inj.min.x); x <= std::min(base.width() - 1, inj.max.x); ++x) {
        world.at(x, y) = Category::kObstacle;
      }
    }
  }
  return world;
}

std::shared_ptr<const Trajectory> replan(
  const CategoryMask & world, const Pose & pose, const APFParams & params, std::string & note)
{
  try {
    const auto dest = find_local_destination(world, params);
    if (!dest) {
      note = "no destination";
      return nullptr;
    }
    const PlanningFields fields = build_fields(world, *dest);
    const PlanResult plan = plan_trajectory(world, {pose.x, pose.y}, *dest, fields, params);
    auto traj = std::make_shared<Trajectory>(
      smooth_bezier(plan.trajectory, world, 2.0 * params.step_size));
    note = plan.fallback_used ? "planned (wavefront fallback)" : "planned";
    return traj;
  } catch (const Error & e) {
    note = e.what();
    return nullptr;
  }
}

}  // namespace

double wrap_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

double LidarScan::beam_angle(int j) const
{
  return pose.heading - fov / 2.0 + fov * (static_cast<double>(j) + 0.5) / n_beams;
}

LidarScan simulate_lidar(
  const CategoryMask & cat, const Pose & pose, int n_beams, double fov, double max_range)
{
  if (!is_traversable(cat, to_cell({pose.x, pose.y}))) {
    throw Error(ErrorCode::kInvalidArgument, "lidar pose is not on a traversable cell");
  }
  if (n_beams < 1 || !(fov > 0.0) || !(max_range > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lidar needs n_beams >= 1, fov > 0, max_range > 0");
  }
  LidarScan scan{pose, n_beams, fov, max_range, {}};
  scan.ranges.reserve(static_cast<std::size_t>(n_beams));
  const Point2 origin{pose.x, pose.y};
  for (int j = 0; j < n_beams; ++j) {
    const Point2 dir = heading_vector(scan.beam_angle(j));
    double range = max_range;
    for (int k = 1; k * kRayStep <= max_range; ++k) {
      const double s = k * kRayStep;
      if (!is_traversable(cat, to_cell(origin + s * dir))) {
        range = s;
        break;
      }
    }
    scan.ranges.push_back(range);
  }
  return scan;
}

std::string to_string(SteeringSource s)
{
  switch (s) {
    case SteeringSource::kTrajectory: return "trajectory";
    case SteeringSource::kLidarOverride: return "lidar_override";
    case SteeringSource::kStop: return "stop";
  }
  return "stop";
}

SteeringCommand fuse(const Trajectory & traj, const LidarScan & scan, const FuseParams & params)
{
  if (traj.points.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fuse needs a non-empty trajectory");
  }
  if (std::all_of(scan.ranges.begin(), scan.ranges.end(),
    [&](double r) {return r < params.safety_range;}))
  {
    return {scan.pose.heading, 0.0, SteeringSource::kStop};
  }
  const Point2 here{scan.pose.x, scan.pose.y};
  double desired = scan.pose.heading;
  const Point2 * target = nullptr;
  for (const auto & p : traj.points) {
    if (norm(p - here) > params.goal_eps) {
      target = &p;
      break;
    }
  }
  if (target == nullptr && norm(traj.points.back() - here) > 0.0) {
    target = &traj.points.back();
  }
  if (target != nullptr) {
    desired = std::atan2(-(target->y - here.y), target->x - here.x);
  }

  // Beams in the cone, plus the single beam nearest the desired heading.
  double cone_min = scan.max_range;
  int nearest = 0;
  double nearest_off = std::numeric_limits<double>::infinity();
  for (int j = 0; j < scan.n_beams; ++j) {
    const double off = std::abs(wrap_angle(scan.beam_angle(j) - desired));
    if (off <= params.cone / 2.0) {
      cone_min = std::min(cone_min, scan.ranges[j]);
    }
    if (off < nearest_off) {
      nearest_off = off;
      nearest = j;
    }
  }
  cone_min = std::min(cone_min, scan.ranges[nearest]);
  if (cone_min < params.safety_range) {
    const auto best = std::max_element(scan.ranges.begin(), scan.ranges.end());
    const int j = static_cast<int>(best - scan.ranges.begin());
    return {wrap_angle(scan.beam_angle(j)), 0.5, SteeringSource::kLidarOverride};
  }
  return {desired, 1.0, SteeringSource::kTrajectory};
}

std::vector<LoopEvent> run_loop(
  const CategoryMask & base, const std::vector<ObstacleInjection> & injections,
  const LoopConfig & config, const APFParams & params)
{
  if (!(config.mask_rate > 0.0) || !(config.lidar_rate >= config.mask_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "run_loop needs lidar_rate >= mask_rate > 0");
  }
  const auto end_ns = static_cast<std::int64_t>(std::llround(config.duration * 1e9));
  std::vector<LoopEvent> events;
  std::shared_ptr<const Trajectory> latest;
  std::int64_t k_mask = 0;
  std::int64_t k_lidar = 0;
  for (;;) {
    const std::int64_t t_mask = tick_ns(k_mask, config.mask_rate);
    const std::int64_t t_lidar = tick_ns(k_lidar, config.lidar_rate);
    const std::int64_t t_ns = std::min(t_mask, t_lidar);
    if (t_ns >= end_ns) {
      break;
    }
    const double t = static_cast<double>(t_ns) * 1e-9;
    const CategoryMask world = world_at(base, injections, t);
    LoopEvent e;
    e.t = t;
    if (t_mask <= t_lidar) {
      e.kind = LoopEvent::Kind::kReplan;
      // The new trajectory replaces the old one in a single handover.
      latest = replan(world, config.pose, params, e.note);
      e.plan_ok = latest != nullptr;
      ++k_mask;
    } else {
      e.kind = LoopEvent::Kind::kSteer;
      if (latest == nullptr || latest->points.empty()) {
        e.command = {config.pose.heading, 0.0, SteeringSource::kStop};
        e.note = "no trajectory";
      } else {
        try {
          const LidarScan scan = simulate_lidar(
            world, config.pose, config.lidar.n_beams, config.lidar.fov, config.lidar.max_range);
          e.command = fuse(*latest, scan, config.fuse);
        } catch (const Error & err) {
          e.command = {config.pose.heading, 0.0, SteeringSource::kStop};
          e.note = err.what();
        }
      }
      ++k_lidar;
    }
    events.push_back(std::move(e));
  }
  return events;
}

std::string event_to_json(const LoopEvent & e)
{
  nlohmann::json j{{"t", e.t}};
  if (e.kind == LoopEvent::Kind::kReplan) {
    j["event"] = "replan";
    j["ok"] = e.plan_ok;
  } else {
    j["event"] = "steer";
    j["heading"] = e.command.heading;
    j["speed_scale"] = e.command.speed_scale;
    j["source"] = to_string(e.command.source);
  }
  if (!e.note.empty()) {
    j["note"] = e.note;
  }
  return j.dump();
}

}  // namespace rubblenav
