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

#include "rubblenav/batch_eval.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace rubblenav
{
namespace
{

using nlohmann::json;

std::map<std::string, std::filesystem::path> list_masks(const std::filesystem::path & dir)
{
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::map<std::string, std::filesystem::path> out;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png")) {
      out.emplace(entry.path().filename().string(), entry.path());
    }
  }
  return out;
}

json opt(const std::optional<double> & v)
{
  return v ? json(*v) : json(nullptr);
}

std::string csv_opt(const std::optional<double> & v)
{
  if (!v) {
    return "";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

std::string table_opt(const std::optional<double> & v)
{
  if (!v) {
    return "     n/a";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%8.4f", *v);
  return buf;
}

struct PairOutcome
{
  std::optional<ConfusionMatrix> cm;
  ObjectReport objects;
};

PairOutcome eval_one(const EvalPair & pair, const ClassSchema & schema, EvalMode mode)
{
  const LabelMask pred = load_mask(pair.pred, schema);
  const LabelMask truth = load_mask(pair.truth, schema);
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    throw Error(ErrorCode::kValidation, pair.name + ": prediction and truth sizes differ");
  }
  PairOutcome out;
  if (mode == EvalMode::kObject) {
    out.objects = object_level_accuracy(pred, truth, schema);
  } else {
    out.cm = confusion(pred, truth, schema);
  }
  return out;
}

}  // namespace

std::vector<EvalPair> pair_directories(
  const std::filesystem::path & pred_dir, const std::filesystem::path & truth_dir)
{
  const auto preds = list_masks(pred_dir);
  const auto truths = list_masks(truth_dir);
  std::vector<EvalPair> pairs;
  for (const auto & [name, truth] : truths) {
    const auto it = preds.find(name);
    if (it == preds.end()) {
      throw Error(ErrorCode::kValidation, "no prediction for truth mask " + name);
    }
    pairs.push_back({name, it->second, truth});
  }
  for (const auto & [name, pred] : preds) {
    if (truths.find(name) == truths.end()) {
      throw Error(ErrorCode::kValidation, "no truth mask for prediction " + name);
    }
  }
  return pairs;
}

EvalMode parse_eval_mode(const std::string & text)
{
  if (text == "class") {
    return EvalMode::kClass;
  }
  if (text == "category") {
    return EvalMode::kCategory;
  }
  if (text == "object") {
    return EvalMode::kObject;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown eval mode: " + text);
}

std::string to_string(EvalMode mode)
{
  switch (mode) {
    case EvalMode::kClass: return "class";
    case EvalMode::kCategory: return "category";
    case EvalMode::kObject: return "object";
  }
  return "class";
}

EvalResult evaluate_pairs(
  const std::vector<EvalPair> & pairs, const ClassSchema & schema, EvalMode mode, int workers)
{
  if (workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  }
  std::vector<PairOutcome> outcomes(pairs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::size_t first_error_index = pairs.size();
  std::mutex error_mutex;

  auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= pairs.size()) {
          return;
        }
        try {
          outcomes[i] = eval_one(pairs[i], schema, mode);
        } catch (...) {
          // Keep the error of the lowest pair index so failures are stable.
          const std::lock_guard lock(error_mutex);
          if (i < first_error_index) {
            first_error_index = i;
            first_error = std::current_exception();
          }
        }
      }
    };
  const int n_threads =
    static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), pairs.size()));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back(work);
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  EvalResult result;
  result.mode = mode;
  result.pairs = pairs.size();
  if (mode == EvalMode::kObject) {
    std::size_t total = 0;
    std::size_t detected = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      for (const auto & o : outcomes[i].objects.objects) {
        ++total;
        detected += o.detected ? 1 : 0;
      }
      result.objects.push_back({pairs[i].name, std::move(outcomes[i].objects)});
    }
    if (total > 0) {
      result.detection_rate = static_cast<double>(detected) / static_cast<double>(total);
    }
    return result;
  }
  ConfusionMatrix sum(schema.size());
  for (const auto & o : outcomes) {
    sum += *o.cm;
  }
  result.metrics = pixel_metrics(
    sum, mode == EvalMode::kClass ? MetricMode::kClass : MetricMode::kCategory, schema);
  return result;
}

std::string eval_to_json(const EvalResult & result)
{
  json j{{"mode", to_string(result.mode)}, {"pairs", result.pairs}};
  if (result.metrics) {
    const auto & m = *result.metrics;
    json rows = json::array();
    for (const auto & c : m.per_class) {
      rows.push_back(
        {{"id", c.id}, {"name", c.name}, {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn},
          {"iou", opt(c.iou)}, {"global", opt(c.global)}, {"precision", opt(c.precision)},
          {"recall", opt(c.recall)}, {"f1", opt(c.f1)}});
    }
    j["evaluated_pixels"] = m.evaluated_pixels;
    j["per_class"] = rows;
    j["mean"] = {
      {"iou", opt(m.mean_iou)}, {"global", opt(m.mean_global)},
      {"precision", opt(m.mean_precision)}, {"recall", opt(m.mean_recall)},
      {"f1", opt(m.mean_f1)}};
    j["overall_pixel_accuracy"] = opt(m.overall_pixel_accuracy);
  } else {
    json rows = json::array();
    for (const auto & p : result.objects) {
      for (const auto & o : p.report.objects) {
        rows.push_back(
          {{"mask", p.name}, {"component", o.component_id}, {"size_px", o.size_px},
            {"covered_px", o.covered_px}, {"coverage", o.coverage}, {"detected", o.detected}});
      }
    }
    j["objects"] = rows;
    j["detection_rate"] = opt(result.detection_rate);
  }
  return j.dump(2);
}

std::string eval_to_csv(const EvalResult & result)
{
  std::string out;
  if (result.metrics) {
    out = "id,name,tp,fp,fn,tn,iou,global,precision,recall,f1\n";
    for (const auto & c : result.metrics->per_class) {
      out += std::to_string(c.id) + "," + c.name + "," + std::to_string(c.tp) + "," +
        std::to_string(c.fp) + "," + std::to_string(c.fn) + "," + std::to_string(c.tn) + "," +
        csv_opt(c.iou) + "," + csv_opt(c.global) + "," + csv_opt(c.precision) + "," +
        csv_opt(c.recall) + "," + csv_opt(c.f1) + "\n";
    }
  } else {
    out = "mask,component,size_px,covered_px,coverage,detected\n";
    for (const auto & p : result.objects) {
      for (const auto & o : p.report.objects) {
        out += p.name + "," + std::to_string(o.component_id) + "," + std::to_string(o.size_px) +
          "," + std::to_string(o.covered_px) + "," + csv_opt(o.coverage) + "," +
          (o.detected ? "1" : "0") + "\n";
      }
    }
  }
  return out;
}

std::string eval_to_table(const EvalResult & result)
{
  std::string out;
  char buf[160];
  if (result.metrics) {
    const auto & m = *result.metrics;
    std::snprintf(
      buf, sizeof(buf), "%-14s %8s %8s %8s %8s %8s\n", "class", "IoU", "Global", "Prec",
      "Recall", "F1");
    out += buf;
    auto row = [&](const std::string & name, const std::optional<double> & a,
        const std::optional<double> & b, const std::optional<double> & c,
        const std::optional<double> & d, const std::optional<double> & e) {
        out += name;
        out.append(name.size() < 14 ? 14 - name.size() : 0, ' ');
        out += " " + table_opt(a) + " " + table_opt(b) + " " + table_opt(c) + " " +
          table_opt(d) + " " + table_opt(e) + "\n";
      };
    for (const auto & c : m.per_class) {
      row(c.name, c.iou, c.global, c.precision, c.recall, c.f1);
    }
    row("mean", m.mean_iou, m.mean_global, m.mean_precision, m.mean_recall, m.mean_f1);
    out += "pixel accuracy " + table_opt(m.overall_pixel_accuracy) + "\n";
  } else {
    std::snprintf(
      buf, sizeof(buf), "%-24s %9s %9s %9s %8s\n", "mask", "component", "size", "coverage",
      "detected");
    out += buf;
    for (const auto & p : result.objects) {
      for (const auto & o : p.report.objects) {
        std::snprintf(
          buf, sizeof(buf), "%-24s %9d %9zu %9.4f %8s\n", p.name.c_str(), o.component_id,
          o.size_px, o.coverage, o.detected ? "yes" : "no");
        out += buf;
      }
    }
    out += "detection rate " + table_opt(result.detection_rate) + "\n";
  }
  return out;
}

}  // namespace rubblenav
