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

#include "rubblenav/argmax_kernel.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "rubblenav/rng.hpp"

namespace rubblenav
{
namespace
{

constexpr std::size_t kBlock = 1024;

// Argmax over pixels [begin, end). Channel-outer within cache-sized blocks;
// the strict '>' keeps the lowest index on ties.
void argmax_range(const ScoreVolume & v, std::size_t begin, std::size_t end, ClassId * out)
{
  const auto scores = v.scores();
  const std::size_t n = v.pixels();
  const int channels = v.channels();
  if (v.layout() == ScoreLayout::kInterleaved) {
    for (std::size_t p = begin; p < end; ++p) {
      const float * s = scores.data() + p * static_cast<std::size_t>(channels);
      float best = s[0];
      int idx = 0;
      for (int c = 1; c < channels; ++c) {
        if (s[c] > best) {
          best = s[c];
          idx = c;
        }
      }
      out[p] = static_cast<ClassId>(idx);
    }
    return;
  }
  std::array<float, kBlock> best{};
  for (std::size_t b = begin; b < end; b += kBlock) {
    const std::size_t len = std::min(kBlock, end - b);
    std::copy_n(scores.data() + b, len, best.begin());
    std::fill_n(out + b, len, ClassId{0});
    for (int c = 1; c < channels; ++c) {
      const float * plane = scores.data() + static_cast<std::size_t>(c) * n + b;
      for (std::size_t i = 0; i < len; ++i) {
        if (plane[i] > best[i]) {
          best[i] = plane[i];
          out[b + i] = static_cast<ClassId>(c);
        }
      }
    }
  }
}

double median(std::vector<double> xs)
{
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

ScoreVolume::ScoreVolume(
  int width, int height, int channels, std::vector<float> scores, ScoreLayout layout)
: width_(width), height_(height), channels_(channels), layout_(layout), scores_(std::move(scores))
{
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "score volume dimensions must be positive");
  }
  if (channels > 256) {
    throw Error(ErrorCode::kInvalidArgument, "score volume has more than 256 channels");
  }
  if (scores_.size() != pixels() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorCode::kInvalidArgument, "score buffer size does not match dimensions");
  }
  if (!std::all_of(scores_.begin(), scores_.end(), [](float s) {return std::isfinite(s);})) {
    throw Error(ErrorCode::kInvalidArgument, "score volume contains non-finite values");
  }
}

ScoreVolume ScoreVolume::random(
  int width, int height, int channels, std::uint64_t seed, ScoreLayout layout)
{
  Rng rng(seed);
  std::vector<float> scores(
    static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
    static_cast<std::size_t>(std::max(channels, 0)));
  for (auto & s : scores) {
    s = static_cast<float>(rng.uniform(-10.0, 10.0));
  }
  return ScoreVolume(width, height, channels, std::move(scores), layout);
}

ScoreVolume ScoreVolume::relayout(ScoreLayout layout) const
{
  if (layout == layout_) {
    return *this;
  }
  std::vector<float> out(scores_.size());
  const std::size_t n = pixels();
  const auto c_count = static_cast<std::size_t>(channels_);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < c_count; ++c) {
      if (layout == ScoreLayout::kInterleaved) {
        out[p * c_count + c] = scores_[c * n + p];
      } else {
        out[c * n + p] = scores_[p * c_count + c];
      }
    }
  }
  return ScoreVolume(width_, height_, channels_, std::move(out), layout);
}

LabelMask argmax_sequential(const ScoreVolume & v)
{
  LabelMask out(v.width(), v.height());
  argmax_range(v, 0, v.pixels(), out.data().data());
  return out;
}

LabelMask argmax_sequential_counted(const ScoreVolume & v, std::uint64_t & visits)
{
  visits = 0;
  LabelMask out(v.width(), v.height());
  for (std::size_t p = 0; p < v.pixels(); ++p) {
    float best = v.score(0, p);
    ++visits;
    int idx = 0;
    for (int c = 1; c < v.channels(); ++c) {
      const float s = v.score(c, p);
      ++visits;
      if (s > best) {
        best = s;
        idx = c;
      }
    }
    out[p] = static_cast<ClassId>(idx);
  }
  return out;
}

LabelMask argmax_parallel(const ScoreVolume & v, int workers)
{
  if (workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "argmax_parallel needs at least one worker");
  }
  LabelMask out(v.width(), v.height());
  ClassId * dst = out.data().data();
  const std::size_t n = v.pixels();
  const auto w = static_cast<std::size_t>(workers);
  if (w == 1) {
    argmax_range(v, 0, n, dst);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t begin = n * i / w;
      const std::size_t end = n * (i + 1) / w;
      pool.emplace_back([&v, begin, end, dst] {argmax_range(v, begin, end, dst);});
    }
  }
  return out;
}

BenchReport bench(const ScoreVolume & v, int reps, int workers)
{
  if (reps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bench needs reps >= 1");
  }
  using Clock = std::chrono::steady_clock;
  std::vector<double> seq_ms;
  std::vector<double> par_ms;
  LabelMask seq_out;
  LabelMask par_out;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    seq_out = argmax_sequential(v);
    auto t1 = Clock::now();
    par_out = argmax_parallel(v, workers);
    auto t2 = Clock::now();
    seq_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    par_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
  }
  BenchReport report;
  report.width = v.width();
  report.height = v.height();
  report.channels = v.channels();
  report.reps = reps;
  report.workers = workers;
  report.layout = v.layout() == ScoreLayout::kPlaneMajor ? "plane-major" : "interleaved";
  report.sequential_ms = median(seq_ms);
  report.parallel_ms = median(par_ms);
  // Clamp so a sub-resolution timing never yields a zero or infinite ratio.
  const double floor_ms = 1e-6;
  report.sequential_ms = std::max(report.sequential_ms, floor_ms);
  report.parallel_ms = std::max(report.parallel_ms, floor_ms);
  report.speedup = report.sequential_ms / report.parallel_ms;
  report.outputs_identical = seq_out == par_out;
  return report;
}

std::string bench_to_json(const BenchReport & r)
{
  return nlohmann::json{
    {"width", r.width}, {"height", r.height}, {"channels", r.channels}, {"reps", r.reps},
    {"workers", r.workers}, {"layout", r.layout}, {"sequential_ms", r.sequential_ms},
    {"parallel_ms", r.parallel_ms}, {"speedup", r.speedup},
    {"outputs_identical", r.outputs_identical},
    {"hardware_threads", std::thread::hardware_concurrency()}}.dump();
}

}  // namespace rubblenav
