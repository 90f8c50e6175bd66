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

#ifndef RUBBLENAV__SCENARIO_HPP_
#define RUBBLENAV__SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Synthetic rubble-field recipe. Obstacles are drawn with the default
/// schema's crack, debris, puddle and building classes on a road background.
struct ScenarioSpec
{
  std::uint64_t seed{42};
  int width{480};
  int height{360};
  int cracks{3};
  int debris{3};
  int puddles{2};
  int walls{2};
  /// Guaranteed free corridor from the bottom band to the top band; 0 disables
  /// the guarantee. Corridor edges sit on even columns and shift only on even
  /// rows so the corridor survives 2x condensing at half width.
  int corridor_width{30};
  /// Obstacle-free rows kept at the top and bottom of the mask.
  int clear_band{4};
};

ScenarioSpec parse_scenario_spec(std::string_view json_text);

struct GeneratedScenario
{
  std::string name;
  LabelMask mask;
  /// Left corridor column per row; empty when corridor_width is 0.
  std::vector<int> corridor_left;
  int corridor_width{0};
  int attempts{1};
};

/// Deterministic in (spec, index). Rejected layouts are regenerated up to a
/// fixed number of attempts; then Error(kValidation) is thrown.
GeneratedScenario generate_scenario(const ScenarioSpec & spec, int index);

std::vector<GeneratedScenario> generate_scenarios(const ScenarioSpec & spec, int count);

/// Writes scenario_NNN.pgm files and manifest.json into dir.
void write_scenarios(
  const std::filesystem::path & dir, const ScenarioSpec & spec,
  const std::vector<GeneratedScenario> & scenarios);

}  // namespace rubblenav

#endif  // RUBBLENAV__SCENARIO_HPP_
