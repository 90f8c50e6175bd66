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

#include "rubblenav/seg_metrics.hpp"

#include <numeric>

#include "rubblenav/grid_fields.hpp"

namespace rubblenav
{
namespace
{

std::optional<double> ratio(std::uint64_t num, std::uint64_t den)
{
  if (den == 0) {
    return std::nullopt;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_of(const std::vector<ClassMetrics> & rows,
  std::optional<double> ClassMetrics::* field)
{
  double sum = 0.0;
  int n = 0;
  for (const auto & r : rows) {
    if (r.*field) {
      sum += *(r.*field);
      ++n;
    }
  }
  if (n == 0) {
    return std::nullopt;
  }
  return sum / n;
}

ClassMetrics one_vs_rest(const ConfusionMatrix & cm, int c)
{
  ClassMetrics m;
  m.id = c;
  const std::uint64_t total = cm.total();
  m.tp = cm.at(c, c);
  for (int o = 0; o < cm.classes(); ++o) {
    if (o != c) {
      m.fp += cm.at(o, c);
      m.fn += cm.at(c, o);
    }
  }
  m.tn = total - m.tp - m.fp - m.fn;
  m.iou = ratio(m.tp, m.tp + m.fp + m.fn);
  m.global = ratio(m.tp + m.tn, total);
  m.precision = ratio(m.tp, m.tp + m.fp);
  m.recall = ratio(m.tp, m.tp + m.fn);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  }
  return m;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int classes)
: k_(classes), counts_(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0)
{
  if (classes <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "confusion matrix needs at least one class");
  }
}

std::uint64_t ConfusionMatrix::total() const
{
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const
{
  std::uint64_t t = 0;
  for (int c = 0; c < k_; ++c) {
    t += at(c, c);
  }
  return t;
}

ConfusionMatrix & ConfusionMatrix::operator+=(const ConfusionMatrix & other)
{
  if (other.k_ != k_) {
    throw Error(ErrorCode::kInvalidArgument, "cannot add confusion matrices of different sizes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
  return *this;
}

ConfusionMatrix confusion(const LabelMask & pred, const LabelMask & truth, const ClassSchema & schema)
{
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and ground truth dimensions differ");
  }
  validate_labels(pred, schema);
  validate_labels(truth, schema);
  ConfusionMatrix cm(schema.size());
  std::vector<bool> is_void(static_cast<std::size_t>(schema.size()));
  for (const auto & c : schema.classes()) {
    is_void[static_cast<std::size_t>(c.id)] = c.is_void;
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!is_void[truth[i]]) {
      ++cm.at(truth[i], pred[i]);
    }
  }
  return cm;
}

ConfusionMatrix fold_to_categories(const ConfusionMatrix & cm, const ClassSchema & schema)
{
  ConfusionMatrix folded(3);
  for (int t = 0; t < cm.classes(); ++t) {
    const auto tc = schema.category(t);
    if (tc == Category::kUndefined) {
      continue;
    }
    for (int p = 0; p < cm.classes(); ++p) {
      folded.at(static_cast<int>(tc), static_cast<int>(schema.category(p))) += cm.at(t, p);
    }
  }
  return folded;
}

MetricsReport pixel_metrics(const ConfusionMatrix & cm, MetricMode mode, const ClassSchema & schema)
{
  if (cm.classes() != schema.size()) {
    throw Error(ErrorCode::kInvalidArgument, "confusion matrix does not match the schema");
  }
  MetricsReport report;
  report.mode = mode;
  if (mode == MetricMode::kClass) {
    report.evaluated_pixels = cm.total();
    for (const auto & c : schema.classes()) {
      if (c.is_void) {
        continue;
      }
      ClassMetrics m = one_vs_rest(cm, c.id);
      m.name = c.name;
      report.per_class.push_back(std::move(m));
    }
    report.overall_pixel_accuracy = ratio(cm.trace(), cm.total());
  } else {
    const ConfusionMatrix folded = fold_to_categories(cm, schema);
    report.evaluated_pixels = folded.total();
    for (const Category c : {Category::kTraversable, Category::kObstacle}) {
      ClassMetrics m = one_vs_rest(folded, static_cast<int>(c));
      m.name = std::string(to_string(c));
      report.per_class.push_back(std::move(m));
    }
    report.overall_pixel_accuracy = ratio(folded.trace(), folded.total());
  }
  report.mean_iou = mean_of(report.per_class, &ClassMetrics::iou);
  report.mean_global = mean_of(report.per_class, &ClassMetrics::global);
  report.mean_precision = mean_of(report.per_class, &ClassMetrics::precision);
  report.mean_recall = mean_of(report.per_class, &ClassMetrics::recall);
  report.mean_f1 = mean_of(report.per_class, &ClassMetrics::f1);
  return report;
}

ObjectReport object_level_accuracy(
  const LabelMask & pred, const LabelMask & truth, const ClassSchema & schema)
{
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction and ground truth dimensions differ");
  }
  validate_labels(pred, schema);
  validate_labels(truth, schema);
  const CategoryMask truth_cat = to_category_mask(truth, schema);
  const CategoryMask pred_cat = to_category_mask(pred, schema);

  Grid<int> component(truth.width(), truth.height(), -1);
  ObjectReport report;
  std::vector<Cell> stack;
  for (int y = 0; y < truth.height(); ++y) {
    for (int x = 0; x < truth.width(); ++x) {
      if (truth_cat.at(x, y) != Category::kObstacle || component.at(x, y) >= 0) {
        continue;
      }
      ObjectResult obj;
      obj.component_id = static_cast<int>(report.objects.size());
      component.at(x, y) = obj.component_id;
      stack.assign(1, Cell{x, y});
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        ++obj.size_px;
        if (pred_cat.at(c) == Category::kObstacle) {
          ++obj.covered_px;
        }
        for (const Cell step : kDirStep) {
          const Cell n{c.x + step.x, c.y + step.y};
          if (truth_cat.in_bounds(n) && truth_cat.at(n) == Category::kObstacle &&
            component.at(n) < 0)
          {
            component.at(n) = obj.component_id;
            stack.push_back(n);
          }
        }
      }
      obj.coverage = static_cast<double>(obj.covered_px) / static_cast<double>(obj.size_px);
      // Integer form of coverage >= 0.5, immune to rounding.
      obj.detected = 2 * obj.covered_px >= obj.size_px;
      report.objects.push_back(obj);
    }
  }
  std::size_t detected = 0;
  for (const auto & o : report.objects) {
    detected += o.detected ? 1 : 0;
  }
  report.detection_rate = ratio(detected, report.objects.size());
  return report;
}

std::string to_string(MetricMode mode)
{
  return mode == MetricMode::kClass ? "class" : "category";
}

}  // namespace rubblenav
