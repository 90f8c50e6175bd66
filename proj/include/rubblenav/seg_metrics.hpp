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

#ifndef RUBBLENAV__SEG_METRICS_HPP_
#define RUBBLENAV__SEG_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rubblenav/mask_model.hpp"

namespace rubblenav
{

/// counts[truth][pred] over pixels whose truth class is not void.
class ConfusionMatrix
{
public:
  explicit ConfusionMatrix(int classes);

  int classes() const noexcept {return k_;}
  std::uint64_t & at(int truth, int pred) {return counts_[index(truth, pred)];}
  std::uint64_t at(int truth, int pred) const {return counts_[index(truth, pred)];}
  std::uint64_t total() const;
  std::uint64_t trace() const;

  /// Element-wise sum; both matrices must have the same class count.
  ConfusionMatrix & operator+=(const ConfusionMatrix & other);

  friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;

private:
  std::size_t index(int truth, int pred) const
  {
    return static_cast<std::size_t>(truth) * static_cast<std::size_t>(k_) +
           static_cast<std::size_t>(pred);
  }

  int k_;
  std::vector<std::uint64_t> counts_;
};

/// Throws Error(kInvalidArgument) on a dimension mismatch.
ConfusionMatrix confusion(const LabelMask & pred, const LabelMask & truth, const ClassSchema & schema);

enum class MetricMode
{
  kClass,
  kCategory,
};

struct ClassMetrics
{
  int id{0};
  std::string name;
  std::uint64_t tp{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};
  std::uint64_t tn{0};
  // std::nullopt marks a 0/0 ratio.
  std::optional<double> iou;
  std::optional<double> global;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct MetricsReport
{
  MetricMode mode{MetricMode::kClass};
  std::uint64_t evaluated_pixels{0};
  std::vector<ClassMetrics> per_class;
  std::optional<double> mean_iou;
  std::optional<double> mean_global;
  std::optional<double> mean_precision;
  std::optional<double> mean_recall;
  std::optional<double> mean_f1;
  std::optional<double> overall_pixel_accuracy;
};

/// Folds a class confusion matrix into Traversable/Obstacle/Undefined rows
/// and columns (indices follow Category); Undefined truth rows are dropped.
ConfusionMatrix fold_to_categories(const ConfusionMatrix & cm, const ClassSchema & schema);

/// One-vs-rest IoU, Global, Precision, Recall and F1 per evaluated class.
/// Class mode evaluates every non-void class; category mode evaluates the
/// Traversable and Obstacle categories of the folded matrix. Means skip
/// undefined values.
MetricsReport pixel_metrics(const ConfusionMatrix & cm, MetricMode mode, const ClassSchema & schema);

struct ObjectResult
{
  int component_id{0};
  std::size_t size_px{0};
  std::size_t covered_px{0};
  double coverage{0.0};
  bool detected{false};
};

struct ObjectReport
{
  std::vector<ObjectResult> objects;
  std::optional<double> detection_rate;
};

/// Ground-truth objects are 8-connected components of Obstacle-category truth
/// pixels, numbered in raster order of their first pixel. An object is
/// detected when at least half its pixels are predicted as any Obstacle class.
ObjectReport object_level_accuracy(
  const LabelMask & pred, const LabelMask & truth, const ClassSchema & schema);

std::string to_string(MetricMode mode);

}  // namespace rubblenav

#endif  // RUBBLENAV__SEG_METRICS_HPP_
