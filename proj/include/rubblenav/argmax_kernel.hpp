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

#ifndef RUBBLENAV__ARGMAX_KERNEL_HPP_
#define RUBBLENAV__ARGMAX_KERNEL_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

enum class ScoreLayout
{
  kPlaneMajor,    ///< scores[c * H * W + p], the usual network output layout
  kInterleaved,   ///< scores[p * C + c]
};

/// Per-pixel class scores of a segmentation network's final layer.
class ScoreVolume
{
public:
  /// Throws Error(kInvalidArgument) on bad dimensions, a size mismatch,
  /// more than 256 channels, or any non-finite score.
  ScoreVolume(
    int width, int height, int channels, std::vector<float> scores,
    ScoreLayout layout = ScoreLayout::kPlaneMajor);

  /// Scores drawn uniformly from [-10, 10) by a seeded generator.
  static ScoreVolume random(
    int width, int height, int channels, std::uint64_t seed,
    ScoreLayout layout = ScoreLayout::kPlaneMajor);

  int width() const noexcept {return width_;}
  int height() const noexcept {return height_;}
  int channels() const noexcept {return channels_;}
  std::size_t pixels() const noexcept
  {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  ScoreLayout layout() const noexcept {return layout_;}
  std::span<const float> scores() const noexcept {return scores_;}

  float score(int channel, std::size_t pixel) const
  {
    return layout_ == ScoreLayout::kPlaneMajor ?
           scores_[static_cast<std::size_t>(channel) * pixels() + pixel] :
           scores_[pixel * static_cast<std::size_t>(channels_) + static_cast<std::size_t>(channel)];
  }

  /// Same scores in the other memory layout.
  ScoreVolume relayout(ScoreLayout layout) const;

private:
  int width_;
  int height_;
  int channels_;
  ScoreLayout layout_;
  std::vector<float> scores_;
};

/// Single-threaded reference: label = smallest channel index holding the
/// pixel's maximum score.
LabelMask argmax_sequential(const ScoreVolume & v);

/// Reference path that also counts score reads; for a W x H x C volume the
/// count is W * H * C.
LabelMask argmax_sequential_counted(const ScoreVolume & v, std::uint64_t & visits);

/// Splits the pixel range into `workers` contiguous slices, one thread each.
/// Output is byte-identical to argmax_sequential for every worker count.
LabelMask argmax_parallel(const ScoreVolume & v, int workers);

struct BenchReport
{
  int width{0};
  int height{0};
  int channels{0};
  int reps{0};
  int workers{0};
  std::string layout;
  double sequential_ms{0.0};
  double parallel_ms{0.0};
  double speedup{0.0};
  bool outputs_identical{false};
};

/// Median wall-clock time of each path over `reps` runs.
BenchReport bench(const ScoreVolume & v, int reps, int workers);

std::string bench_to_json(const BenchReport & report);

}  // namespace rubblenav

#endif  // RUBBLENAV__ARGMAX_KERNEL_HPP_
