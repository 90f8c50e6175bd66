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

#include "rubblenav/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace rubblenav
{
namespace
{

constexpr double kMinDeterminant = 1e-12;

Eigen::Matrix3d to_eigen(const Homography::Matrix & h)
{
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      m(r, c) = h[r][c];
    }
  }
  return m;
}

Homography::Matrix from_eigen(const Eigen::Matrix3d & m)
{
  Homography::Matrix h{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      h[r][c] = m(r, c);
    }
  }
  return h;
}

bool any_three_collinear(const std::array<Point2, 4> & q)
{
  double extent = 0.0;
  for (const auto & a : q) {
    for (const auto & b : q) {
      extent = std::max(extent, norm(a - b));
    }
  }
  if (extent == 0.0) {
    return true;
  }
  const double tol = 1e-9 * extent * extent;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        const Point2 u = q[j] - q[i];
        const Point2 v = q[k] - q[i];
        if (std::abs(u.x * v.y - u.y * v.x) <= tol) {
          return true;
        }
      }
    }
  }
  return false;
}

// Similarity taking the points to zero centroid and mean distance sqrt(2).
Eigen::Matrix3d normalizer(const std::array<Point2, 4> & q)
{
  Point2 c{};
  for (const auto & p : q) {
    c = c + 0.25 * p;
  }
  double mean = 0.0;
  for (const auto & p : q) {
    mean += 0.25 * norm(p - c);
  }
  const double s = std::sqrt(2.0) / mean;
  Eigen::Matrix3d t;
  t << s, 0, -s * c.x,
    0, s, -s * c.y,
    0, 0, 1;
  return t;
}

Point2 apply(const Eigen::Matrix3d & t, Point2 p)
{
  const Eigen::Vector3d v = t * Eigen::Vector3d(p.x, p.y, 1.0);
  return {v.x() / v.z(), v.y() / v.z()};
}

}  // namespace

Homography::Homography(const Matrix & h)
{
  const double scale = h[2][2];
  if (!std::isfinite(scale) || std::abs(scale) < std::numeric_limits<double>::min()) {
    throw Error(ErrorCode::kSingularSystem, "homography cannot be normalized (h22 == 0)");
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      h_[r][c] = h[r][c] / scale;
    }
  }
  h_[2][2] = 1.0;
  const double det = determinant();
  if (!std::isfinite(det) || std::abs(det) <= kMinDeterminant) {
    throw Error(ErrorCode::kSingularSystem, "homography is singular");
  }
}

Homography Homography::identity()
{
  return Homography(Matrix{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
}

Homography Homography::translation(double dx, double dy)
{
  return Homography(Matrix{{{1, 0, dx}, {0, 1, dy}, {0, 0, 1}}});
}

double Homography::determinant() const
{
  return to_eigen(h_).determinant();
}

Homography Homography::inverse() const
{
  return Homography(from_eigen(to_eigen(h_).inverse()));
}

Point2 Homography::project(Point2 p) const
{
  const double w = h_[2][0] * p.x + h_[2][1] * p.y + h_[2][2];
  const double x = h_[0][0] * p.x + h_[0][1] * p.y + h_[0][2];
  const double y = h_[1][0] * p.x + h_[1][1] * p.y + h_[1][2];
  if (w == 0.0) {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  return {x / w, y / w};
}

Homography fit_homography(const QuadCorrespondence & corr)
{
  if (any_three_collinear(corr.src) || any_three_collinear(corr.dst)) {
    throw Error(ErrorCode::kSingularSystem, "degenerate correspondence: three points collinear");
  }
  const Eigen::Matrix3d ts = normalizer(corr.src);
  const Eigen::Matrix3d td = normalizer(corr.dst);

  // Unknowns h00..h21 with h22 = 1:
  //   x' (h20 x + h21 y + 1) = h00 x + h01 y + h02
  //   y' (h20 x + h21 y + 1) = h10 x + h11 y + h12
  Eigen::Matrix<double, 8, 8> a;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    const Point2 s = apply(ts, corr.src[i]);
    const Point2 d = apply(td, corr.dst[i]);
    a.row(2 * i) << s.x, s.y, 1, 0, 0, 0, -d.x * s.x, -d.x * s.y;
    a.row(2 * i + 1) << 0, 0, 0, s.x, s.y, 1, -d.y * s.x, -d.y * s.y;
    b(2 * i) = d.x;
    b(2 * i + 1) = d.y;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(a);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kSingularSystem, "homography system is singular");
  }
  const Eigen::Matrix<double, 8, 1> x = lu.solve(b);
  Eigen::Matrix3d hn;
  hn << x(0), x(1), x(2),
    x(3), x(4), x(5),
    x(6), x(7), 1.0;
  const Eigen::Matrix3d h = td.inverse() * hn * ts;
  return Homography(from_eigen(h));
}

LabelMask warp_mask(
  const LabelMask & mask, const Homography & h, int out_w, int out_h, ClassId fill)
{
  const Homography inv = h.inverse();
  LabelMask out(out_w, out_h, fill);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const Point2 src = inv.project({static_cast<double>(x), static_cast<double>(y)});
      if (!std::isfinite(src.x) || !std::isfinite(src.y)) {
        continue;
      }
      // Bounds check before rounding keeps the int conversion in range.
      if (src.x < -0.5 || src.y < -0.5 || src.x >= mask.width() - 0.5 ||
        src.y >= mask.height() - 0.5)
      {
        continue;
      }
      const Cell c = to_cell(src);
      if (mask.in_bounds(c)) {
        out.at(x, y) = mask.at(c);
      }
    }
  }
  return out;
}

LabelMask condense(const LabelMask & mask, const ClassSchema & schema)
{
  const int out_w = (mask.width() + 1) / 2;
  const int out_h = (mask.height() + 1) / 2;
  LabelMask out(out_w, out_h);
  std::vector<bool> obstacle(256, false);
  for (const auto & c : schema.classes()) {
    obstacle[static_cast<std::size_t>(c.id)] = c.category == Category::kObstacle;
  }
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      std::array<ClassId, 4> block{};
      int n = 0;
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          const int sx = std::min(2 * x + dx, mask.width() - 1);
          const int sy = std::min(2 * y + dy, mask.height() - 1);
          block[n++] = mask.at(sx, sy);
        }
      }
      const bool has_obstacle = std::any_of(
        block.begin(), block.end(), [&](ClassId c) {return obstacle[c];});
      int best = -1;
      int best_count = 0;
      for (const ClassId candidate : block) {
        if (has_obstacle && !obstacle[candidate]) {
          continue;
        }
        const int count = static_cast<int>(std::count(block.begin(), block.end(), candidate));
        if (count > best_count || (count == best_count && candidate < best)) {
          best = candidate;
          best_count = count;
        }
      }
      out.at(x, y) = static_cast<ClassId>(best);
    }
  }
  return out;
}

QuadCorrespondence parse_calibration(std::string_view json_text)
{
  QuadCorrespondence corr;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const auto & src = doc.at("src");
    const auto & dst = doc.at("dst");
    if (!src.is_array() || !dst.is_array() || src.size() != 4 || dst.size() != 4) {
      throw Error(ErrorCode::kParse, "calibration needs exactly 4 src and 4 dst points");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      corr.src[i] = {src[i].at(0).get<double>(), src[i].at(1).get<double>()};
      corr.dst[i] = {dst[i].at(0).get<double>(), dst[i].at(1).get<double>()};
    }
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("calibration: ") + e.what());
  }
  return corr;
}

QuadCorrespondence load_calibration(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open calibration file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

}  // namespace rubblenav
