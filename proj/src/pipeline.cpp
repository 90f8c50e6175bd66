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

#include "rubblenav/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rubblenav
{
namespace
{

using nlohmann::json;

std::string read_text(const std::filesystem::path & path, const char * what)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, std::string("cannot open ") + what + " " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
{
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

template<typename T>
void read_opt(const json & j, const char * key, T & out)
{
  if (j.contains(key)) {
    out = j.at(key).get<T>();
  }
}

APFParams parse_apf(const json & j)
{
  APFParams p;
  read_opt(j, "k_att", p.k_att);
  read_opt(j, "k_rep", p.k_rep);
  read_opt(j, "d0", p.d0);
  p.probe_radius = p.d0;
  read_opt(j, "probe_radius", p.probe_radius);
  read_opt(j, "step_size", p.step_size);
  read_opt(j, "max_iters", p.max_iters);
  read_opt(j, "goal_eps", p.goal_eps);
  read_opt(j, "stuck_window", p.stuck_window);
  read_opt(j, "stuck_eps", p.stuck_eps);
  read_opt(j, "too_close", p.too_close);
  read_opt(j, "vehicle_width", p.vehicle_width);
  p.validate();
  return p;
}

void parse_fusion(const json & j, LidarConfig & lidar, FuseParams & fuse)
{
  read_opt(j, "n_beams", lidar.n_beams);
  read_opt(j, "fov", lidar.fov);
  read_opt(j, "max_range", lidar.max_range);
  read_opt(j, "safety_range", fuse.safety_range);
  read_opt(j, "cone", fuse.cone);
}

// Re-raises with the stage name prepended, keeping the error code.
template<typename F>
auto stage(const char * name, F && f)
{
  try {
    return f();
  } catch (const Error & e) {
    throw Error(e.code(), std::string("[") + name + "] " + e.what());
  }
}

}  // namespace

int exit_code_for(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kNoDestination: return kExitNoDestination;
    case ErrorCode::kNoPath: return kExitNoPath;
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
    case ErrorCode::kIo:
    case ErrorCode::kInvalidArgument:
      return kExitBadInput;
    case ErrorCode::kSingularSystem: return kExitFailure;
  }
  return kExitFailure;
}

PipelineConfig parse_pipeline_config(
  std::string_view json_text, const std::filesystem::path & base_dir)
{
  PipelineConfig cfg;
  try {
    const json doc = json::parse(json_text);
    if (doc.contains("schema")) {
      cfg.schema_path = resolve(base_dir, doc.at("schema").get<std::string>());
    }
    if (doc.contains("calibration")) {
      cfg.calibration_path = resolve(base_dir, doc.at("calibration").get<std::string>());
    }
    read_opt(doc, "warp_width", cfg.warp_width);
    read_opt(doc, "warp_height", cfg.warp_height);
    cfg.apf = parse_apf(doc.value("apf", json::object()));
    parse_fusion(doc.value("fusion", json::object()), cfg.lidar, cfg.fuse);
    cfg.fuse.goal_eps = cfg.apf.goal_eps;
    if (doc.contains("output_dir")) {
      cfg.output_dir = resolve(base_dir, doc.at("output_dir").get<std::string>());
    }
    read_opt(doc, "visualize", cfg.visualize);
  } catch (const json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("config: ") + e.what());
  }
  if (cfg.warp_width < 0 || cfg.warp_height < 0) {
    throw Error(ErrorCode::kValidation, "config: warp size must be non-negative");
  }
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path & path)
{
  return parse_pipeline_config(read_text(path, "config file"), path.parent_path());
}

PipelineContext make_context(const PipelineConfig & config)
{
  return PipelineContext{
    config.schema_path ? load_schema(*config.schema_path) : default_schema(),
    config.calibration_path ? fit_homography(load_calibration(*config.calibration_path)) :
    Homography::identity(),
    config};
}

PipelineResult run_pipeline(const LabelMask & mask, const PipelineContext & ctx)
{
  const auto & cfg = ctx.config;
  const auto & params = cfg.apf;
  stage("input", [&] {validate_labels(mask, ctx.schema); return 0;});

  const int out_w = cfg.warp_width > 0 ? cfg.warp_width : mask.width();
  const int out_h = cfg.warp_height > 0 ? cfg.warp_height : mask.height();
  LabelMask aerial = stage(
    "warp", [&] {
      return warp_mask(mask, ctx.homography, out_w, out_h, ctx.schema.unknown_fill());
    });
  LabelMask condensed = stage("condense", [&] {return condense(aerial, ctx.schema);});
  CategoryMask cat = to_category_mask(condensed, ctx.schema);

  const auto start = find_start_cell(cat, params);
  const auto dest = find_local_destination(cat, params);
  if (!start || !dest) {
    throw Error(
      ErrorCode::kNoDestination,
      "[destination] bottom row has no traversable interval wide enough for the vehicle");
  }
  PlanningFields fields = stage("fields", [&] {return build_fields(cat, *dest);});
  PlanResult plan = stage(
    "apf", [&] {return plan_trajectory(cat, to_point(*start), *dest, fields, params);});
  Trajectory smoothed = smooth_bezier(plan.trajectory, cat, 2.0 * params.step_size);

  const Pose pose{static_cast<double>(start->x), static_cast<double>(start->y),
    std::numbers::pi / 2};
  LidarScan scan = stage(
    "fuse", [&] {
      return simulate_lidar(cat, pose, cfg.lidar.n_beams, cfg.lidar.fov, cfg.lidar.max_range);
    });
  const SteeringCommand steering = fuse(smoothed, scan, cfg.fuse);

  return PipelineResult{
    std::move(aerial), std::move(condensed), std::move(cat), *start, *dest, std::move(fields),
    std::move(plan), std::move(smoothed), std::move(scan), steering};
}

std::string steering_to_json(const SteeringCommand & cmd)
{
  return json{
    {"heading", cmd.heading}, {"speed_scale", cmd.speed_scale},
    {"source", to_string(cmd.source)}}.dump();
}

SimulationScenario parse_simulation_scenario(
  std::string_view json_text, const std::filesystem::path & base_dir)
{
  try {
    const json doc = json::parse(json_text);
    const ClassSchema schema = doc.contains("schema") ?
      load_schema(resolve(base_dir, doc.at("schema").get<std::string>())) : default_schema();
    const LabelMask mask = load_mask(resolve(base_dir, doc.at("mask").get<std::string>()), schema);
    SimulationScenario sc{to_category_mask(mask, schema), {}, {}, {}};
    sc.apf = parse_apf(doc.value("apf", json::object()));
    auto & loop = sc.loop;
    read_opt(doc, "lidar_rate", loop.lidar_rate);
    read_opt(doc, "mask_rate", loop.mask_rate);
    read_opt(doc, "duration", loop.duration);
    parse_fusion(doc.value("fusion", json::object()), loop.lidar, loop.fuse);
    read_opt(doc, "safety_range", loop.fuse.safety_range);
    loop.fuse.goal_eps = sc.apf.goal_eps;
    if (doc.contains("pose")) {
      const auto & p = doc.at("pose");
      loop.pose.x = p.at("x").get<double>();
      loop.pose.y = p.at("y").get<double>();
      read_opt(p, "heading", loop.pose.heading);
    } else {
      const auto start = find_start_cell(sc.world, sc.apf);
      if (!start) {
        throw Error(ErrorCode::kNoDestination, "scenario: no start cell on the bottom row");
      }
      loop.pose.x = start->x;
      loop.pose.y = start->y;
    }
    for (const auto & inj : doc.value("injections", json::array())) {
      const auto rect = inj.at("rect").get<std::vector<int>>();
      if (rect.size() != 4) {
        throw Error(ErrorCode::kParse, "scenario: injection rect must be [x0, y0, x1, y1]");
      }
      sc.injections.push_back(
        {inj.at("t").get<double>(), Cell{rect[0], rect[1]}, Cell{rect[2], rect[3]}});
    }
    return sc;
  } catch (const json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("scenario: ") + e.what());
  }
}

SimulationScenario load_simulation_scenario(const std::filesystem::path & path)
{
  return parse_simulation_scenario(read_text(path, "scenario file"), path.parent_path());
}

}  // namespace rubblenav
