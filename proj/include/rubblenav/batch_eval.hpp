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

#ifndef RUBBLENAV__BATCH_EVAL_HPP_
#define RUBBLENAV__BATCH_EVAL_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rubblenav/seg_metrics.hpp"

namespace rubblenav
{

struct EvalPair
{
  std::string name;
  std::filesystem::path pred;
  std::filesystem::path truth;
};

/// Matches .pgm/.png files by name. A truth file without a prediction (or the
/// reverse) is a validation error; the result is sorted by name.
std::vector<EvalPair> pair_directories(
  const std::filesystem::path & pred_dir, const std::filesystem::path & truth_dir);

enum class EvalMode
{
  kClass,
  kCategory,
  kObject,
};

EvalMode parse_eval_mode(const std::string & text);
std::string to_string(EvalMode mode);

struct PairObjects
{
  std::string name;
  ObjectReport report;
};

struct EvalResult
{
  EvalMode mode{EvalMode::kClass};
  std::size_t pairs{0};
  /// Pixel modes: metrics over the summed confusion matrix.
  std::optional<MetricsReport> metrics;
  /// Object mode: per-pair components, plus the pooled detection rate.
  std::vector<PairObjects> objects;
  std::optional<double> detection_rate;
};

/// Pairs are processed on up to `workers` threads; results are merged in pair
/// order so the output does not depend on the worker count.
EvalResult evaluate_pairs(
  const std::vector<EvalPair> & pairs, const ClassSchema & schema, EvalMode mode, int workers);

std::string eval_to_json(const EvalResult & result);
/// One row per class (pixel modes) or per object (object mode).
std::string eval_to_csv(const EvalResult & result);
std::string eval_to_table(const EvalResult & result);

}  // namespace rubblenav

#endif  // RUBBLENAV__BATCH_EVAL_HPP_
