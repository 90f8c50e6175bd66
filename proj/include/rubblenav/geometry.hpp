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

#ifndef RUBBLENAV__GEOMETRY_HPP_
#define RUBBLENAV__GEOMETRY_HPP_

#include <array>
#include <filesystem>
#include <string_view>

#include "rubblenav/common.hpp"
#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// Planar projective map, normalized so that h[2][2] == 1.
class Homography
{
public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  /// Normalizes by h[2][2]; throws Error(kSingularSystem) when the matrix
  /// cannot be normalized or |det| <= 1e-12 afterwards.
  explicit Homography(const Matrix & h);

  static Homography identity();
  static Homography translation(double dx, double dy);

  const Matrix & matrix() const noexcept {return h_;}
  double operator()(int r, int c) const {return h_[r][c];}

  double determinant() const;
  Homography inverse() const;

  /// Applies the map to a point. Points mapped to the line at infinity come
  /// back as non-finite coordinates.
  Point2 project(Point2 p) const;

private:
  Matrix h_{};
};

/// Four point pairs. No three points of either quad may be collinear.
struct QuadCorrespondence
{
  std::array<Point2, 4> src;
  std::array<Point2, 4> dst;
};

/// Exact four-point solve of the eight-unknown linear system.
Homography fit_homography(const QuadCorrespondence & corr);

/// Inverse mapping with nearest-neighbour sampling; labels are never mixed.
/// Output pixels whose preimage falls outside the source take `fill`.
LabelMask warp_mask(
  const LabelMask & mask, const Homography & h, int out_w, int out_h, ClassId fill);

/// Halves each axis. Each 2x2 block becomes its most frequent Obstacle class
/// when it contains any Obstacle pixel, otherwise its most frequent class;
/// ties go to the lowest class id. Odd dimensions are edge-replicated first.
LabelMask condense(const LabelMask & mask, const ClassSchema & schema);

QuadCorrespondence parse_calibration(std::string_view json_text);
QuadCorrespondence load_calibration(const std::filesystem::path & path);

}  // namespace rubblenav

#endif  // RUBBLENAV__GEOMETRY_HPP_
