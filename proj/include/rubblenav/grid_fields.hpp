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

#ifndef RUBBLENAV__GRID_FIELDS_HPP_
#define RUBBLENAV__GRID_FIELDS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>

#include "rubblenav/common.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

// All fields use the 8-connected grid with unit step cost, so distances are
// discrete Chebyshev distances. Undefined cells count as obstacles.

using DistanceField = Grid<std::int32_t>;
using GradientField = Grid<std::uint8_t>;
using WavefrontField = Grid<std::int32_t>;

inline constexpr std::int32_t kDistInf = std::numeric_limits<std::int32_t>::max();
inline constexpr std::int32_t kUnreachable = std::numeric_limits<std::int32_t>::max();

/// Direction codes 0..7 are 45 degree steps counter-clockwise as drawn, code 0
/// is +x and code 2 points to the top of the mask (decreasing row).
inline constexpr std::uint8_t kDirNone = 0xFF;

inline constexpr std::array<Cell, 8> kDirStep{{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}}};

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Unit vectors of the direction codes, written out so that opposite codes
/// are exact negatives of each other.
inline constexpr std::array<Point2, 8> kDirUnit{{
    {1.0, 0.0}, {kInvSqrt2, -kInvSqrt2}, {0.0, -1.0}, {-kInvSqrt2, -kInvSqrt2},
    {-1.0, 0.0}, {-kInvSqrt2, kInvSqrt2}, {0.0, 1.0}, {kInvSqrt2, kInvSqrt2}}};

inline bool is_blocking(Category c) {return c != Category::kTraversable;}

/// Multi-source BFS from every Obstacle/Undefined cell. Cells that no source
/// can reach (the mask has none) hold kDistInf.
DistanceField brushfire(const CategoryMask & cat);

/// Code of the 8-neighbour with the smallest distance (lowest code on ties);
/// kDirNone where the distance is 0 or kDistInf.
GradientField gradient_map(const DistanceField & dist);

/// BFS hop counts from `dest` over Traversable cells; kUnreachable elsewhere.
/// Throws Error(kInvalidArgument) when dest is not a Traversable cell.
WavefrontField wavefront(const CategoryMask & cat, Cell dest);

/// Writes a field as a grayscale PGM heat map for debugging.
void dump_distance_pgm(const std::filesystem::path & path, const DistanceField & dist);
void dump_gradient_pgm(const std::filesystem::path & path, const GradientField & grad);
void dump_wavefront_pgm(const std::filesystem::path & path, const WavefrontField & hops);

}  // namespace rubblenav

#endif  // RUBBLENAV__GRID_FIELDS_HPP_
