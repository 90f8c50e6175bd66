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

#include "rubblenav/grid_fields.hpp"

#include <algorithm>
#include <vector>

namespace rubblenav
{
namespace
{

// Plain FIFO over preallocated storage; every cell is enqueued at most once.
struct CellQueue
{
  explicit CellQueue(std::size_t capacity) {cells.reserve(capacity);}
  void push(Cell c) {cells.push_back(c);}
  bool empty() const {return head == cells.size();}
  Cell pop() {return cells[head++];}

  std::vector<Cell> cells;
  std::size_t head{0};
};

template<typename T>
void write_pgm(const std::filesystem::path & path, const Grid<T> & g, auto to_gray)
{
  LabelMask img(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) {
    img[i] = to_gray(g[i]);
  }
  save_mask(path, img);
}

std::int32_t finite_max(const Grid<std::int32_t> & g)
{
  std::int32_t m = 1;
  for (const auto v : g.data()) {
    if (v != kDistInf) {
      m = std::max(m, v);
    }
  }
  return m;
}

}  // namespace

DistanceField brushfire(const CategoryMask & cat)
{
  DistanceField dist(cat.width(), cat.height(), kDistInf);
  CellQueue queue(cat.size());
  for (int y = 0; y < cat.height(); ++y) {
    for (int x = 0; x < cat.width(); ++x) {
      if (is_blocking(cat.at(x, y))) {
        dist.at(x, y) = 0;
        queue.push({x, y});
      }
    }
  }
  while (!queue.empty()) {
    const Cell c = queue.pop();
    const std::int32_t next = dist.at(c) + 1;
    for (const Cell step : kDirStep) {
      const Cell n{c.x + step.x, c.y + step.y};
      if (dist.in_bounds(n) && dist.at(n) == kDistInf) {
        dist.at(n) = next;
        queue.push(n);
      }
    }
  }
  return dist;
}

GradientField gradient_map(const DistanceField & dist)
{
  GradientField grad(dist.width(), dist.height(), kDirNone);
  for (int y = 0; y < dist.height(); ++y) {
    for (int x = 0; x < dist.width(); ++x) {
      const std::int32_t d = dist.at(x, y);
      if (d == 0 || d == kDistInf) {
        continue;
      }
      std::int32_t best = kDistInf;
      std::uint8_t code = kDirNone;
      for (std::uint8_t i = 0; i < 8; ++i) {
        const Cell n{x + kDirStep[i].x, y + kDirStep[i].y};
        if (dist.in_bounds(n) && dist.at(n) < best) {
          best = dist.at(n);
          code = i;
        }
      }
      grad.at(x, y) = code;
    }
  }
  return grad;
}

WavefrontField wavefront(const CategoryMask & cat, Cell dest)
{
  if (!is_traversable(cat, dest)) {
    throw Error(ErrorCode::kInvalidArgument, "wavefront destination is not a traversable cell");
  }
  WavefrontField hops(cat.width(), cat.height(), kUnreachable);
  CellQueue queue(cat.size());
  hops.at(dest) = 0;
  queue.push(dest);
  while (!queue.empty()) {
    const Cell c = queue.pop();
    const std::int32_t next = hops.at(c) + 1;
    for (const Cell step : kDirStep) {
      const Cell n{c.x + step.x, c.y + step.y};
      if (is_traversable(cat, n) && hops.at(n) == kUnreachable) {
        hops.at(n) = next;
        queue.push(n);
      }
    }
  }
  return hops;
}

void dump_distance_pgm(const std::filesystem::path & path, const DistanceField & dist)
{
  const double scale = 254.0 / finite_max(dist);
  write_pgm(
    path, dist, [scale](std::int32_t d) {
      return d == kDistInf ? ClassId{255} : static_cast<ClassId>(d * scale);
    });
}

void dump_gradient_pgm(const std::filesystem::path & path, const GradientField & grad)
{
  write_pgm(
    path, grad, [](std::uint8_t code) {
      return code == kDirNone ? ClassId{0} : static_cast<ClassId>(32 * code + 31);
    });
}

void dump_wavefront_pgm(const std::filesystem::path & path, const WavefrontField & hops)
{
  const double scale = 254.0 / finite_max(hops);
  write_pgm(
    path, hops, [scale](std::int32_t h) {
      return h == kUnreachable ? ClassId{255} : static_cast<ClassId>(h * scale);
    });
}

}  // namespace rubblenav
