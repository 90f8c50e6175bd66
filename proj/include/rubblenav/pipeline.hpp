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

#ifndef RUBBLENAV__PIPELINE_HPP_
#define RUBBLENAV__PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rubblenav/fusion_sim.hpp"
#include "rubblenav/geometry.hpp"
#include "rubblenav/grid_fields.hpp"
#include "rubblenav/local_planner.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Process exit statuses shared by every subcommand.
enum ExitCode : int
{
  kExitOk = 0,
  kExitFailure = 1,
  kExitBadInput = 2,
  kExitNoDestination = 3,
  kExitNoPath = 4,
};

int exit_code_for(ErrorCode code);

struct PipelineConfig
{
  std::optional<std::filesystem::path> schema_path;        ///< built-in table when absent
  std::optional<std::filesystem::path> calibration_path;   ///< identity warp when absent
  int warp_width{0};    ///< aerial view size; 0 keeps the input size
  int warp_height{0};
  APFParams apf;
  LidarConfig lidar;
  FuseParams fuse;
  std::filesystem::path output_dir{"."};
  bool visualize{true};
};

/// Relative paths in the document resolve against base_dir. Missing keys keep
/// their defaults; APF parameters are validated.
PipelineConfig parse_pipeline_config(
  std::string_view json_text, const std::filesystem::path & base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path & path);

/// Resolved, ready-to-run configuration.
struct PipelineContext
{
  ClassSchema schema;
  Homography homography;
  PipelineConfig config;
};

PipelineContext make_context(const PipelineConfig & config);

struct PipelineResult
{
  LabelMask aerial;
  LabelMask condensed;
  CategoryMask categories;
  Cell start;
  Cell destination;
  PlanningFields fields;
  PlanResult plan;
  Trajectory trajectory;   ///< smoothed when smoothing was safe
  LidarScan scan;
  SteeringCommand steering;
};

/// warp -> condense -> destination -> fields -> APF -> smooth -> fuse, all in
/// memory. Errors carry the failing stage in their message; a missing
/// destination raises kNoDestination and an unreachable one kNoPath.
PipelineResult run_pipeline(const LabelMask & mask, const PipelineContext & ctx);

std::string steering_to_json(const SteeringCommand & cmd);

/// Simulation scenario file for the two-rate fusion loop.
struct SimulationScenario
{
  CategoryMask world;
  std::vector<ObstacleInjection> injections;
  LoopConfig loop;
  APFParams apf;
};

SimulationScenario parse_simulation_scenario(
  std::string_view json_text, const std::filesystem::path & base_dir = {});
SimulationScenario load_simulation_scenario(const std::filesystem::path & path);

}  // namespace rubblenav

#endif  // RUBBLENAV__PIPELINE_HPP_
