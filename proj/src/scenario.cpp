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

#include "rubblenav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "rubblenav/grid_fields.hpp"
#include "rubblenav/rng.hpp"

namespace rubblenav
{
namespace
{

constexpr ClassId kRoad = 0;
constexpr ClassId kCrack = 1;
constexpr ClassId kPuddle = 2;
constexpr ClassId kBuilding = 5;
constexpr ClassId kDebris = 7;
constexpr int kMaxAttempts = 16;

std::uint64_t mix(std::uint64_t x)
{
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Canvas
{
public:
  Canvas(LabelMask & mask, const Grid<std::uint8_t> & keep_clear)
  : mask_(mask), keep_clear_(keep_clear) {}

  void paint(int x, int y, ClassId cls)
  {
    if (mask_.in_bounds(x, y) && !keep_clear_.at(x, y)) {
      mask_.at(x, y) = cls;
    }
  }

  void disc(double cx, double cy, double r, ClassId cls)
  {
    const int r_int = static_cast<int>(std::ceil(r));
    const int x0 = round_to_cell(cx);
    const int y0 = round_to_cell(cy);
    for (int dy = -r_int; dy <= r_int; ++dy) {
      for (int dx = -r_int; dx <= r_int; ++dx) {
        if (dx * dx + dy * dy <= r * r) {
          paint(x0 + dx, y0 + dy, cls);
        }
      }
    }
  }

private:
  LabelMask & mask_;
  const Grid<std::uint8_t> & keep_clear_;
};

void draw_crack(Canvas & canvas, Rng & rng, int w, int h)
{
  double x = rng.uniform(0, w);
  double y = rng.uniform(0, h);
  double heading = rng.uniform(0, 2 * std::numbers::pi);
  const double radius = rng.uniform(0.8, 2.0);
  const int segments = rng.uniform_int(20, 60);
  for (int s = 0; s < segments; ++s) {
    heading += rng.uniform(-0.6, 0.6);
    const double len = rng.uniform(3, 8);
    for (double t = 0; t < len; t += 0.5) {
      canvas.disc(x + t * std::cos(heading), y + t * std::sin(heading), radius, kCrack);
    }
    x += len * std::cos(heading);
    y += len * std::sin(heading);
  }
}

void draw_debris(Canvas & canvas, Rng & rng, int w, int h)
{
  const double cx = rng.uniform(0, w);
  const double cy = rng.uniform(0, h);
  const int lumps = rng.uniform_int(4, 10);
  for (int i = 0; i < lumps; ++i) {
    canvas.disc(cx + rng.uniform(-15, 15), cy + rng.uniform(-15, 15), rng.uniform(4, 12), kDebris);
  }
}

void draw_puddle(Canvas & canvas, Rng & rng, LabelMask & mask)
{
  const double cx = rng.uniform(0, mask.width());
  const double cy = rng.uniform(0, mask.height());
  const double a = rng.uniform(8, 30);
  const double b = rng.uniform(5, 15);
  const double phi = rng.uniform(0, std::numbers::pi);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const int r = static_cast<int>(std::ceil(a));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double u = (dx * c + dy * s) / a;
      const double v = (-dx * s + dy * c) / b;
      if (u * u + v * v <= 1.0) {
        canvas.paint(round_to_cell(cx) + dx, round_to_cell(cy) + dy, kPuddle);
      }
    }
  }
}

void draw_wall(Canvas & canvas, Rng & rng, int w, int h, int band)
{
  const int lo = band + 8;
  const int hi = h - band - 18;
  if (hi <= lo) {
    return;
  }
  const int y0 = rng.uniform_int(lo, hi);
  const int thickness = rng.uniform_int(4, 10);
  for (int y = y0; y < y0 + thickness; ++y) {
    for (int x = 0; x < w; ++x) {
      canvas.paint(x, y, kBuilding);
    }
  }
}

// Traversable connectivity from the bottom band to the top row.
bool connected_top_to_bottom(const LabelMask & mask)
{
  CategoryMask cat(mask.width(), mask.height(), Category::kObstacle);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    cat[i] = mask[i] == kRoad ? Category::kTraversable : Category::kObstacle;
  }
  const Cell start{mask.width() / 2, mask.height() - 1};
  if (!is_traversable(cat, start)) {
    return false;
  }
  const WavefrontField hops = wavefront(cat, start);
  for (int x = 0; x < mask.width(); ++x) {
    if (hops.at(x, 0) != kUnreachable) {
      return true;
    }
  }
  return false;
}

void validate(const ScenarioSpec & spec)
{
  if (spec.width < 8 || spec.height < 8) {
    throw Error(ErrorCode::kValidation, "scenario size must be at least 8x8");
  }
  if (spec.cracks < 0 || spec.debris < 0 || spec.puddles < 0 || spec.walls < 0) {
    throw Error(ErrorCode::kValidation, "scenario obstacle counts must be non-negative");
  }
  if (spec.corridor_width < 0 || spec.corridor_width > spec.width) {
    throw Error(ErrorCode::kValidation, "corridor width must be in [0, width]");
  }
  if (spec.clear_band < 1 || 2 * spec.clear_band >= spec.height) {
    throw Error(ErrorCode::kValidation, "clear band must be >= 1 and leave room for obstacles");
  }
}

}  // namespace

ScenarioSpec parse_scenario_spec(std::string_view json_text)
{
  ScenarioSpec spec;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    spec.seed = doc.value("seed", spec.seed);
    spec.width = doc.value("width", spec.width);
    spec.height = doc.value("height", spec.height);
    spec.cracks = doc.value("cracks", spec.cracks);
    spec.debris = doc.value("debris", spec.debris);
    spec.puddles = doc.value("puddles", spec.puddles);
    spec.walls = doc.value("walls", spec.walls);
    spec.corridor_width = doc.value("corridor_width", spec.corridor_width);
    spec.clear_band = doc.value("clear_band", spec.clear_band);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kParse, std::string("scenario spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

GeneratedScenario generate_scenario(const ScenarioSpec & spec, int index)
{
  validate(spec);
  const int w = spec.width;
  const int h = spec.height;
  // Rounded up to even so condensing keeps exactly half.
  const int cw = spec.corridor_width + (spec.corridor_width % 2);
  if (cw > w) {
    throw Error(ErrorCode::kValidation, "corridor does not fit after rounding to an even width");
  }

  char name[32];
  std::snprintf(name, sizeof(name), "scenario_%03d.pgm", index);

  for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    Rng rng(mix(spec.seed ^ mix(static_cast<std::uint64_t>(index) * 131 +
      static_cast<std::uint64_t>(attempt))));
    LabelMask mask(w, h, kRoad);
    Grid<std::uint8_t> keep_clear(w, h, 0);
    for (int y = 0; y < h; ++y) {
      if (y < spec.clear_band || y >= h - spec.clear_band) {
        for (int x = 0; x < w; ++x) {
          keep_clear.at(x, y) = 1;
        }
      }
    }

    std::vector<int> left;
    if (cw > 0) {
      const int max_left = (w - cw) / 2 * 2;
      int l = std::clamp((w / 2 - cw / 2) / 2 * 2 + 2 * rng.uniform_int(-4, 4), 0, max_left);
      left.assign(static_cast<std::size_t>(h), 0);
      for (int y = h - 1; y >= 0; --y) {
        // Shift only where a condensed row begins (even y going upward).
        if (y % 2 == 1 && y < h - 1) {
          const double u = rng.uniform();
          if (u < 0.25) {
            l = std::max(0, l - 2);
          } else if (u < 0.5) {
            l = std::min(max_left, l + 2);
          }
        }
        left[static_cast<std::size_t>(y)] = l;
        for (int x = l; x < l + cw; ++x) {
          keep_clear.at(x, y) = 1;
        }
      }
    }

    Canvas canvas(mask, keep_clear);
    for (int i = 0; i < spec.walls; ++i) {
      draw_wall(canvas, rng, w, h, spec.clear_band);
    }
    for (int i = 0; i < spec.cracks; ++i) {
      draw_crack(canvas, rng, w, h);
    }
    for (int i = 0; i < spec.debris; ++i) {
      draw_debris(canvas, rng, w, h);
    }
    for (int i = 0; i < spec.puddles; ++i) {
      draw_puddle(canvas, rng, mask);
    }

    if (cw > 0 && !connected_top_to_bottom(mask)) {
      continue;
    }
    return GeneratedScenario{name, std::move(mask), std::move(left), cw, attempt};
  }
  throw Error(
    ErrorCode::kValidation,
    "scenario generation failed: obstacles preclude the corridor after retries");
}

std::vector<GeneratedScenario> generate_scenarios(const ScenarioSpec & spec, int count)
{
  if (count < 0) {
    throw Error(ErrorCode::kValidation, "scenario count must be non-negative");
  }
  std::vector<GeneratedScenario> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(generate_scenario(spec, i));
  }
  return out;
}

void write_scenarios(
  const std::filesystem::path & dir, const ScenarioSpec & spec,
  const std::vector<GeneratedScenario> & scenarios)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  }
  nlohmann::json entries = nlohmann::json::array();
  for (const auto & sc : scenarios) {
    save_mask(dir / sc.name, sc.mask);
    entries.push_back(
      {{"file", sc.name}, {"width", sc.mask.width()}, {"height", sc.mask.height()},
        {"corridor_width", sc.corridor_width}, {"corridor_left", sc.corridor_left},
        {"attempts", sc.attempts}});
  }
  const nlohmann::json manifest{
    {"spec",
      {{"seed", spec.seed}, {"width", spec.width}, {"height", spec.height},
        {"cracks", spec.cracks}, {"debris", spec.debris}, {"puddles", spec.puddles},
        {"walls", spec.walls}, {"corridor_width", spec.corridor_width},
        {"clear_band", spec.clear_band}}},
    {"scenarios", entries}};
  std::ofstream out(dir / "manifest.json");
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write manifest in " + dir.string());
  }
  out << manifest.dump(2) << '\n';
}

}  // namespace rubblenav
