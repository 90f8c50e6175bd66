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

#include "rubblenav/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace rubblenav
{
namespace
{

void check_dims(const LabelMask & mask, const DistanceField * dist)
{
  if (dist != nullptr && (dist->width() != mask.width() || dist->height() != mask.height())) {
    throw Error(ErrorCode::kInvalidArgument, "render: distance field size differs from mask");
  }
}

std::string hex(Rgb c)
{
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

int max_finite(const DistanceField & dist)
{
  int m = 1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] != kDistInf) {
      m = std::max(m, dist[i]);
    }
  }
  return m;
}

// Red near obstacles, fading out with distance.
std::uint8_t heat_alpha(std::int32_t d, int max_d)
{
  if (d == kDistInf) {
    return 0;
  }
  const double f = 1.0 - static_cast<double>(d) / max_d;
  return static_cast<std::uint8_t>(std::lround(160.0 * f));
}

}  // namespace

std::string format_coord(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string render_svg(
  const LabelMask & mask, const ClassSchema & schema, const Trajectory & traj,
  const DistanceField * dist)
{
  check_dims(mask, dist);
  const int w = mask.width();
  const int h = mask.height();
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
    "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
    std::to_string(h) + "\" shape-rendering=\"crispEdges\">\n";

  // One rect per horizontal run of equal labels.
  out += "<g id=\"mask\">\n";
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const ClassId id = mask.at(x, y);
      int end = x + 1;
      while (end < w && mask.at(end, y) == id) {
        ++end;
      }
      const Rgb c = id < schema.size() ? schema[id].color : Rgb{0, 0, 0};
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
        std::to_string(end - x) + "\" height=\"1\" fill=\"" + hex(c) + "\"/>\n";
      x = end;
    }
  }
  out += "</g>\n";

  if (dist != nullptr) {
    const int max_d = max_finite(*dist);
    out += "<g id=\"distance\" fill=\"#ff0000\">\n";
    for (int y = 0; y < h; ++y) {
      int x = 0;
      while (x < w) {
        const std::uint8_t a = heat_alpha(dist->at(x, y), max_d);
        int end = x + 1;
        while (end < w && heat_alpha(dist->at(end, y), max_d) == a) {
          ++end;
        }
        if (a > 0) {
          char buf[16];
          std::snprintf(buf, sizeof(buf), "%.3f", a / 255.0);
          out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
            "\" width=\"" + std::to_string(end - x) + "\" height=\"1\" fill-opacity=\"" + buf +
            "\"/>\n";
        }
        x = end;
      }
    }
    out += "</g>\n";
  }

  if (!traj.points.empty()) {
    // Cell centers sit at integer coordinates; rect cells span [x, x+1).
    out += "<g id=\"trajectory\" transform=\"translate(0.5 0.5)\">\n<polyline points=\"";
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
      if (i > 0) {
        out += ' ';
      }
      out += format_coord(traj.points[i].x) + "," + format_coord(traj.points[i].y);
    }
    out += "\" fill=\"none\" stroke=\"#00ff00\" stroke-width=\"1\"/>\n</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_ppm(
  const LabelMask & mask, const ClassSchema & schema, const Trajectory & traj,
  const DistanceField * dist)
{
  check_dims(mask, dist);
  const int w = mask.width();
  const int h = mask.height();
  std::vector<Rgb> px(mask.size());
  const int max_d = dist != nullptr ? max_finite(*dist) : 1;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    Rgb c = mask[i] < schema.size() ? schema[mask[i]].color : Rgb{0, 0, 0};
    if (dist != nullptr) {
      const int a = heat_alpha((*dist)[i], max_d);
      auto blend = [a](std::uint8_t v, int target) {
          return static_cast<std::uint8_t>((v * (255 - a) + target * a + 127) / 255);
        };
      c = {blend(c.r, 255), blend(c.g, 0), blend(c.b, 0)};
    }
    px[i] = c;
  }
  auto plot = [&](Point2 p) {
      const Cell c = to_cell(p);
      if (mask.in_bounds(c.x, c.y)) {
        px[mask.index(c.x, c.y)] = Rgb{0, 255, 0};
      }
    };
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    plot(traj.points[i]);
    if (i + 1 < traj.points.size()) {
      const Point2 a = traj.points[i];
      const Point2 b = traj.points[i + 1];
      const int n = static_cast<int>(std::ceil(norm(b - a) / 0.5));
      for (int k = 1; k < n; ++k) {
        plot(a + (static_cast<double>(k) / n) * (b - a));
      }
    }
  }
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + px.size() * 3);
  for (const auto & c : px) {
    out += static_cast<char>(c.r);
    out += static_cast<char>(c.g);
    out += static_cast<char>(c.b);
  }
  return out;
}

void render_overlay(
  const std::filesystem::path & path, const LabelMask & mask, const ClassSchema & schema,
  const Trajectory & traj, const DistanceField * dist)
{
  const bool ppm = path.extension() == ".ppm";
  const std::string bytes =
    ppm ? render_ppm(mask, schema, traj, dist) : render_svg(mask, schema, traj, dist);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write overlay " + path.string());
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

}  // namespace rubblenav
