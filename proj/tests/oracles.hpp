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

// Slow, obviously-correct reference implementations used by the tests.
// None of these share code with the library beyond the plain data types.

#ifndef RUBBLENAV_TESTS__ORACLES_HPP_
#define RUBBLENAV_TESTS__ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "rubblenav/common.hpp"
#include "rubblenav/mask_model.hpp"
#include "rubblenav/rng.hpp"

namespace oracle
{

using rubblenav::Category;
using rubblenav::CategoryMask;
using rubblenav::Cell;
using rubblenav::Grid;
using rubblenav::LabelMask;
using rubblenav::Point2;

inline constexpr std::int32_t kInf = std::numeric_limits<std::int32_t>::max();

inline CategoryMask random_categories(
  rubblenav::Rng & rng, int w, int h, double p_obstacle, double p_undefined = 0.0)
{
  CategoryMask m(w, h, Category::kTraversable);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double u = rng.uniform();
    if (u < p_obstacle) {
      m[i] = Category::kObstacle;
    } else if (u < p_obstacle + p_undefined) {
      m[i] = Category::kUndefined;
    }
  }
  return m;
}

inline LabelMask random_labels(rubblenav::Rng & rng, int w, int h, int k)
{
  LabelMask m(w, h, 0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = static_cast<rubblenav::ClassId>(rng.uniform_int(0, k - 1));
  }
  return m;
}

/// Minimum over every non-traversable cell of max(|dx|, |dy|).
inline Grid<std::int32_t> chebyshev_distance(const CategoryMask & cat)
{
  Grid<std::int32_t> out(cat.width(), cat.height(), kInf);
  for (int y = 0; y < cat.height(); ++y) {
    for (int x = 0; x < cat.width(); ++x) {
      for (int oy = 0; oy < cat.height(); ++oy) {
        for (int ox = 0; ox < cat.width(); ++ox) {
          if (cat.at(ox, oy) != Category::kTraversable) {
            const int d = std::max(std::abs(ox - x), std::abs(oy - y));
            out.at(x, y) = std::min(out.at(x, y), d);
          }
        }
      }
    }
  }
  return out;
}

/// Iterated relaxation until nothing changes; connectivity only.
inline Grid<std::uint8_t> flood_reachable(const CategoryMask & cat, Cell seed)
{
  Grid<std::uint8_t> reach(cat.width(), cat.height(), 0);
  if (cat.at(seed) != Category::kTraversable) {
    return reach;
  }
  reach.at(seed) = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < cat.height(); ++y) {
      for (int x = 0; x < cat.width(); ++x) {
        if (reach.at(x, y) || cat.at(x, y) != Category::kTraversable) {
          continue;
        }
        for (int dy = -1; dy <= 1 && !reach.at(x, y); ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if ((dx || dy) && cat.in_bounds(nx, ny) && reach.at(nx, ny)) {
              reach.at(x, y) = 1;
              changed = true;
              break;
            }
          }
        }
      }
    }
  }
  return reach;
}

/// Unit vector of direction i written with trigonometry (angle 45 i degrees,
/// counter-clockwise as drawn, so +y of the mask is -sin).
inline Point2 probe_dir(int i)
{
  const double a = i * std::numbers::pi / 4.0;
  return {std::cos(a), -std::sin(a)};
}

struct Force
{
  double fx{0.0};
  double fy{0.0};
};

inline Force attractive(Point2 q, Point2 g, double k_att)
{
  return {k_att * (g.x - q.x), k_att * (g.y - q.y)};
}

inline Force repulsive(
  Point2 q, const Grid<std::int32_t> & dist, double k_rep, double d0, double radius)
{
  Force f;
  for (int i = 0; i < 8; ++i) {
    const Point2 u = probe_dir(i);
    int cx = static_cast<int>(std::floor(q.x + radius * u.x + 0.5));
    int cy = static_cast<int>(std::floor(q.y + radius * u.y + 0.5));
    cx = std::min(std::max(cx, 0), dist.width() - 1);
    cy = std::min(std::max(cy, 0), dist.height() - 1);
    const std::int32_t di = dist.at(cx, cy);
    if (di == kInf || di >= d0) {
      continue;
    }
    const double d = di == 0 ? 0.5 : di;
    const double mag = k_rep * (1.0 / d - 1.0 / d0) / (d * d);
    f.fx += -mag * u.x;
    f.fy += -mag * u.y;
  }
  return f;
}

/// Bottom-up row scan written directly from the description.
inline std::optional<Cell> row_scan(const CategoryMask & cat, int vehicle_width)
{
  std::optional<Cell> dest;
  for (int y = cat.height() - 1; y >= 0; --y) {
    int best_len = 0;
    int best_center = -1;
    for (int x0 = 0; x0 < cat.width(); ++x0) {
      if (cat.at(x0, y) != Category::kTraversable ||
        (x0 > 0 && cat.at(x0 - 1, y) == Category::kTraversable))
      {
        continue;
      }
      int x1 = x0;
      while (x1 < cat.width() && cat.at(x1, y) == Category::kTraversable) {
        ++x1;
      }
      const int len = x1 - x0;
      if (len >= vehicle_width && len > best_len) {
        best_len = len;
        best_center = x0 + len / 2;
      }
    }
    if (best_len == 0) {
      return dest;
    }
    dest = Cell{best_center, y};
  }
  return dest;
}

/// Per-pixel tally, truth rows, predicted columns; void truth skipped.
inline std::vector<std::uint64_t> tally(
  const LabelMask & pred, const LabelMask & truth, const rubblenav::ClassSchema & schema)
{
  const int k = schema.size();
  std::vector<std::uint64_t> cm(static_cast<std::size_t>(k * k), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!schema.is_void(truth[i])) {
      ++cm[static_cast<std::size_t>(truth[i] * k + pred[i])];
    }
  }
  return cm;
}

/// Discrete turning: sum of absolute heading changes along a polyline.
inline double total_turning(const std::vector<Point2> & pts)
{
  double total = 0.0;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const double a1 = std::atan2(pts[i - 1].y - pts[i - 2].y, pts[i - 1].x - pts[i - 2].x);
    const double a2 = std::atan2(pts[i].y - pts[i - 1].y, pts[i].x - pts[i - 1].x);
    double d = a2 - a1;
    while (d > std::numbers::pi) {
      d -= 2 * std::numbers::pi;
    }
    while (d < -std::numbers::pi) {
      d += 2 * std::numbers::pi;
    }
    total += std::abs(d);
  }
  return total;
}

inline CategoryMask categories_from_rows(const std::vector<const char *> & rows)
{
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(std::char_traits<char>::length(rows[0]));
  CategoryMask m(w, h, Category::kTraversable);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const char c = rows[static_cast<std::size_t>(y)][x];
      m.at(x, y) = c == '#' ? Category::kObstacle :
        c == '?' ? Category::kUndefined : Category::kTraversable;
    }
  }
  return m;
}

}  // namespace oracle

#endif  // RUBBLENAV_TESTS__ORACLES_HPP_
