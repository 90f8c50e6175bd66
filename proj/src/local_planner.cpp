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

#include "rubblenav/local_planner.hpp"

#include <algorithm>
#include <cstdlib>

#include <json.hpp>

namespace rubblenav
{
namespace
{

struct Run
{
  int begin{0};
  int length{0};
};

std::vector<Run> qualifying_runs(const CategoryMask & cat, int row, int min_length)
{
  std::vector<Run> runs;
  int x = 0;
  while (x < cat.width()) {
    if (cat.at(x, row) != Category::kTraversable) {
      ++x;
      continue;
    }
    const int begin = x;
    while (x < cat.width() && cat.at(x, row) == Category::kTraversable) {
      ++x;
    }
    if (x - begin >= min_length) {
      runs.push_back({begin, x - begin});
    }
  }
  return runs;
}

// Every cell touched by a fine walk along the segment is Traversable.
bool segment_clear(const CategoryMask & cat, Point2 a, Point2 b)
{
  const double len = norm(b - a);
  const int n = std::max(1, static_cast<int>(std::ceil(len / 0.25)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (!is_traversable(cat, to_cell(a + t * (b - a)))) {
      return false;
    }
  }
  return true;
}

bool finite(ForceVector f) {return std::isfinite(f.fx) && std::isfinite(f.fy);}

}  // namespace

void APFParams::validate() const
{
  auto positive = [](double v, const char * name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kValidation, std::string("APF parameter ") + name + " must be > 0");
      }
    };
  positive(k_att, "k_att");
  positive(k_rep, "k_rep");
  positive(d0, "d0");
  positive(probe_radius, "probe_radius");
  positive(step_size, "step_size");
  positive(max_iters, "max_iters");
  positive(goal_eps, "goal_eps");
  positive(stuck_window, "stuck_window");
  positive(stuck_eps, "stuck_eps");
  positive(too_close, "too_close");
  positive(vehicle_width, "vehicle_width");
  if (!(goal_eps < d0)) {
    throw Error(ErrorCode::kValidation, "APF parameter goal_eps must be < d0");
  }
  if (stuck_window < 2) {
    throw Error(ErrorCode::kValidation, "APF parameter stuck_window must be >= 2");
  }
}

PlanningFields build_fields(const CategoryMask & cat, Cell dest)
{
  PlanningFields f{brushfire(cat), {}, wavefront(cat, dest)};
  f.grad = gradient_map(f.dist);
  return f;
}

std::optional<Cell> find_local_destination(const CategoryMask & cat, const APFParams & params)
{
  std::optional<Cell> dest;
  for (int row = cat.height() - 1; row >= 0; --row) {
    const auto runs = qualifying_runs(cat, row, params.vehicle_width);
    if (runs.empty()) {
      break;
    }
    Run best = runs.front();
    for (const Run & r : runs) {
      if (r.length > best.length) {
        best = r;
      }
    }
    dest = Cell{best.begin + best.length / 2, row};
  }
  return dest;
}

std::optional<Cell> find_start_cell(const CategoryMask & cat, const APFParams & params)
{
  const int row = cat.height() - 1;
  const int center = cat.width() / 2;
  std::optional<Cell> start;
  int best_offset = 0;
  for (const Run & r : qualifying_runs(cat, row, params.vehicle_width)) {
    const int x = std::clamp(center, r.begin, r.begin + r.length - 1);
    const int offset = std::abs(x - center);
    if (!start || offset < best_offset) {
      start = Cell{x, row};
      best_offset = offset;
    }
  }
  return start;
}

ForceVector attractive_force(Point2 q, Point2 goal, double k_att)
{
  return {-k_att * (q.x - goal.x), -k_att * (q.y - goal.y)};
}

std::array<ProbeSample, 8> probe_distances(
  Point2 q, const DistanceField & dist, const APFParams & params)
{
  std::array<ProbeSample, 8> samples{};
  for (int i = 0; i < 8; ++i) {
    const Point2 p = q + params.probe_radius * kDirUnit[i];
    Cell c = to_cell(p);
    c.x = std::clamp(c.x, 0, dist.width() - 1);
    c.y = std::clamp(c.y, 0, dist.height() - 1);
    samples[i] = {c, dist.at(c)};
  }
  return samples;
}

ForceVector repulsive_force(Point2 q, const DistanceField & dist, const APFParams & params)
{
  ForceVector f;
  const auto samples = probe_distances(q, dist, params);
  for (int i = 0; i < 8; ++i) {
    const std::int32_t di = samples[i].dist;
    if (di == kDistInf || static_cast<double>(di) >= params.d0) {
      continue;
    }
    const double d = di == 0 ? 0.5 : static_cast<double>(di);
    const double mag = params.k_rep * (1.0 / d - 1.0 / params.d0) * (1.0 / (d * d));
    f.fx -= mag * kDirUnit[i].x;
    f.fy -= mag * kDirUnit[i].y;
  }
  return f;
}

ForceVector net_force(
  Point2 q, Point2 goal, const DistanceField & dist, const APFParams & params)
{
  return attractive_force(q, goal, params.k_att) + repulsive_force(q, dist, params);
}

bool needs_alternative(Point2 q, const DistanceField & dist, const APFParams & params)
{
  const Cell here = to_cell(q);
  if (dist.in_bounds(here) && static_cast<double>(dist.at(here)) < params.too_close) {
    return true;
  }
  const auto samples = probe_distances(q, dist, params);
  std::int32_t min_d = kDistInf;
  for (const auto & s : samples) {
    min_d = std::min(min_d, s.dist);
  }
  if (min_d == kDistInf || static_cast<double>(min_d) >= params.d0) {
    return false;
  }
  int ties = 0;
  Point2 sum{};
  for (int i = 0; i < 8; ++i) {
    if (samples[i].dist == min_d) {
      ++ties;
      sum = sum + kDirUnit[i];
    }
  }
  return ties >= 2 && norm(sum) > 1e-9;
}

ForceVector alternative_repulsive(
  Point2 q, const DistanceField & dist, const GradientField & grad, const APFParams & params)
{
  (void)dist;
  const Cell here = to_cell(q);
  if (!grad.in_bounds(here) || grad.at(here) == kDirNone) {
    return {};
  }
  const Point2 toward = kDirUnit[grad.at(here)];
  return {-params.k_rep * toward.x, -params.k_rep * toward.y};
}

PlanResult plan_trajectory(
  const CategoryMask & cat, Point2 start, Cell dest, const PlanningFields & fields,
  const APFParams & params)
{
  params.validate();
  const Cell start_cell = to_cell(start);
  if (!is_traversable(cat, start_cell)) {
    throw Error(ErrorCode::kInvalidArgument, "plan start is not on a traversable cell");
  }
  if (!is_traversable(cat, dest)) {
    throw Error(ErrorCode::kInvalidArgument, "plan destination is not a traversable cell");
  }
  const WavefrontField & hops = fields.hops;
  if (hops.at(dest) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "wavefront field was not built for this destination");
  }
  if (hops.at(start_cell) == kUnreachable) {
    throw Error(ErrorCode::kNoPath, "destination is unreachable from the start cell");
  }

  const Point2 goal = to_point(dest);
  PlanResult result;
  auto & pts = result.trajectory.points;
  pts.push_back(start);
  Point2 q = start;
  bool arrived = false;

  for (int iter = 0; iter < params.max_iters; ++iter) {
    if (norm(q - goal) <= params.goal_eps) {
      arrived = true;
      break;
    }
    ForceVector f;
    if (needs_alternative(q, fields.dist, params)) {
      f = attractive_force(q, goal, params.k_att) +
        alternative_repulsive(q, fields.dist, fields.grad, params);
      ++result.alternative_steps;
    } else {
      f = net_force(q, goal, fields.dist, params);
    }
    const double mag = magnitude(f);
    if (!finite(f) || mag == 0.0) {
      break;
    }
    const Point2 next = q + (params.step_size / mag) * Point2{f.fx, f.fy};
    const Cell c = to_cell(next);
    if (!is_traversable(cat, c) || hops.at(c) == kUnreachable) {
      break;
    }
    q = next;
    pts.push_back(q);
    ++result.apf_steps;
    const auto n = pts.size();
    if (n > static_cast<std::size_t>(params.stuck_window) &&
      norm(pts[n - 1] - pts[n - 1 - static_cast<std::size_t>(params.stuck_window)]) <
      params.stuck_eps)
    {
      break;
    }
  }
  if (!arrived && norm(q - goal) <= params.goal_eps) {
    arrived = true;
  }

  if (arrived && segment_clear(cat, q, goal)) {
    const double len = norm(goal - q);
    const int n = static_cast<int>(std::ceil(len / params.step_size));
    for (int i = 1; i < n; ++i) {
      pts.push_back(q + (static_cast<double>(i) / n) * (goal - q));
    }
    if (!(pts.back() == goal)) {
      pts.push_back(goal);
    }
    return result;
  }

  // Strict descent on the hop counts; each step lowers the count by one.
  result.fallback_used = true;
  Cell c = to_cell(q);
  if (!(to_point(c) == q)) {
    pts.push_back(to_point(c));
  }
  while (hops.at(c) > 0) {
    Cell best = c;
    for (const Cell step : kDirStep) {
      const Cell nb{c.x + step.x, c.y + step.y};
      if (hops.in_bounds(nb) && hops.at(nb) < hops.at(best)) {
        best = nb;
      }
    }
    c = best;
    pts.push_back(to_point(c));
  }
  return result;
}

Trajectory smooth_bezier(const Trajectory & traj, const CategoryMask & cat, double max_spacing)
{
  const auto & pts = traj.points;
  const std::size_t n = pts.size();
  if (n < 4) {
    return traj;
  }
  const std::array<Point2, 4> ctrl{pts[0], pts[n / 3], pts[2 * n / 3], pts[n - 1]};
  Trajectory out;
  out.smoothed = true;
  out.points.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n - 1);
    const double s = 1.0 - t;
    const double b0 = s * s * s;
    const double b1 = 3.0 * s * s * t;
    const double b2 = 3.0 * s * t * t;
    const double b3 = t * t * t;
    Point2 p{
      b0 * ctrl[0].x + b1 * ctrl[1].x + b2 * ctrl[2].x + b3 * ctrl[3].x,
      b0 * ctrl[0].y + b1 * ctrl[1].y + b2 * ctrl[2].y + b3 * ctrl[3].y};
    if (j == 0) {
      p = ctrl[0];
    } else if (j == n - 1) {
      p = ctrl[3];
    }
    if (!is_traversable(cat, to_cell(p))) {
      return traj;
    }
    if (j > 0 && norm(p - out.points.back()) > max_spacing) {
      return traj;
    }
    out.points.push_back(p);
  }
  return out;
}

std::string trajectory_to_json(const Trajectory & traj, bool fallback_used)
{
  nlohmann::json points = nlohmann::json::array();
  for (const auto & p : traj.points) {
    points.push_back({p.x, p.y});
  }
  return nlohmann::json{
    {"points", points}, {"smoothed", traj.smoothed}, {"fallback_used", fallback_used}}.dump();
}

TrajectoryFile parse_trajectory_json(std::string_view json_text)
{
  TrajectoryFile file;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto & p : doc.at("points")) {
      file.trajectory.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    file.trajectory.smoothed = doc.value("smoothed", false);
    file.fallback_used = doc.value("fallback_used", false);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("trajectory: ") + e.what());
  }
  return file;
}

}  // namespace rubblenav
