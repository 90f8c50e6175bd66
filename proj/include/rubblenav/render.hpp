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

#ifndef RUBBLENAV__RENDER_HPP_
#define RUBBLENAV__RENDER_HPP_

#include <filesystem>
#include <string>

#include "rubblenav/grid_fields.hpp"
#include "rubblenav/local_planner.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Fixed-precision coordinate text used for polyline vertices.
std::string format_coord(double v);

/// Mask colored by schema, optional distance heat layer, trajectory polyline.
/// Byte-identical for identical inputs.
std::string render_svg(
  const LabelMask & mask, const ClassSchema & schema, const Trajectory & traj,
  const DistanceField * dist = nullptr);

/// Binary P6 raster of the same overlay; the trajectory is drawn per cell.
std::string render_ppm(
  const LabelMask & mask, const ClassSchema & schema, const Trajectory & traj,
  const DistanceField * dist = nullptr);

/// Picks SVG or PPM from the extension (.ppm selects PPM).
void render_overlay(
  const std::filesystem::path & path, const LabelMask & mask, const ClassSchema & schema,
  const Trajectory & traj, const DistanceField * dist = nullptr);

}  // namespace rubblenav

#endif  // RUBBLENAV__RENDER_HPP_
