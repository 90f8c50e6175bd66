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

// rubblenav: plan, eval, bench-argmax, simulate, gen-scenarios, render.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rubblenav/argmax_kernel.hpp"
#include "rubblenav/batch_eval.hpp"
#include "rubblenav/pipeline.hpp"
#include "rubblenav/render.hpp"
#include "rubblenav/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rubblenav;

namespace
{

std::string read_file(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
}

json cell_json(Cell c) {return json::array({c.x, c.y});}

// --- plan ------------------------------------------------------------------

struct PlanArgs
{
  std::string mask;
  std::string config;
  std::string schema;
  std::string calib;
  std::string out;
  std::string dump_fields;
  bool pretty{false};
};

int run_plan(const PlanArgs & a)
{
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_pipeline_config(a.config);
  if (!a.schema.empty()) {
    cfg.schema_path = a.schema;
  }
  if (!a.calib.empty()) {
    cfg.calibration_path = a.calib;
  }
  if (!a.out.empty()) {
    cfg.output_dir = a.out;
  }
  const PipelineContext ctx = make_context(cfg);
  const LabelMask mask = load_mask(a.mask, ctx.schema);
  const PipelineResult r = run_pipeline(mask, ctx);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  const fs::path traj_path = cfg.output_dir / "trajectory.json";
  write_file(traj_path, trajectory_to_json(r.trajectory, r.plan.fallback_used) + "\n");
  std::optional<fs::path> overlay;
  if (cfg.visualize) {
    overlay = cfg.output_dir / "overlay.svg";
    render_overlay(*overlay, r.condensed, ctx.schema, r.trajectory);
  }
  if (!a.dump_fields.empty()) {
    fs::create_directories(a.dump_fields, ec);
    dump_distance_pgm(fs::path(a.dump_fields) / "distance.pgm", r.fields.dist);
    dump_gradient_pgm(fs::path(a.dump_fields) / "gradient.pgm", r.fields.grad);
    dump_wavefront_pgm(fs::path(a.dump_fields) / "wavefront.pgm", r.fields.hops);
  }

  if (a.pretty) {
    std::printf("start        (%d, %d)\n", r.start.x, r.start.y);
    std::printf("destination  (%d, %d)\n", r.destination.x, r.destination.y);
    std::printf(
      "trajectory   %zu points, smoothed=%s, fallback=%s\n", r.trajectory.points.size(),
      r.trajectory.smoothed ? "yes" : "no", r.plan.fallback_used ? "yes" : "no");
    std::printf(
      "steering     heading=%.4f rad, speed=%.2f, source=%s\n", r.steering.heading,
      r.steering.speed_scale, to_string(r.steering.source).c_str());
    std::printf("written      %s\n", traj_path.string().c_str());
    if (overlay) {
      std::printf("overlay      %s\n", overlay->string().c_str());
    }
    return kExitOk;
  }
  const json report{
    {"start", cell_json(r.start)},
    {"destination", cell_json(r.destination)},
    {"points", r.trajectory.points.size()},
    {"smoothed", r.trajectory.smoothed},
    {"fallback_used", r.plan.fallback_used},
    {"apf_steps", r.plan.apf_steps},
    {"alternative_steps", r.plan.alternative_steps},
    {"steering", json::parse(steering_to_json(r.steering))},
    {"trajectory", traj_path.string()},
    {"overlay", overlay ? json(overlay->string()) : json(nullptr)}};
  std::cout << report.dump() << "\n";
  return kExitOk;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs
{
  std::string pred;
  std::string truth;
  std::string schema;
  std::string mode{"class"};
  std::string out;
  int workers{1};
  bool pretty{false};
};

int run_eval(const EvalArgs & a)
{
  const ClassSchema schema = a.schema.empty() ? default_schema() : load_schema(a.schema);
  const auto pairs = pair_directories(a.pred, a.truth);
  const EvalResult result = evaluate_pairs(pairs, schema, parse_eval_mode(a.mode), a.workers);
  const std::string report = eval_to_json(result);
  if (!a.out.empty()) {
    write_file(fs::path(a.out) / "eval.json", report + "\n");
    write_file(fs::path(a.out) / "eval.csv", eval_to_csv(result));
  }
  if (a.pretty) {
    std::cout << eval_to_table(result);
  } else {
    std::cout << report << "\n";
  }
  return kExitOk;
}

// --- bench-argmax ----------------------------------------------------------

struct BenchArgs
{
  int width{480};
  int height{360};
  int channels{10};
  int reps{11};
  int workers{4};
  std::uint64_t seed{1};
  std::string layout{"plane"};
  std::string out;
  bool pretty{false};
};

int run_bench(const BenchArgs & a)
{
  if (a.reps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "reps must be >= 1");
  }
  ScoreLayout layout = ScoreLayout::kPlaneMajor;
  if (a.layout == "interleaved") {
    layout = ScoreLayout::kInterleaved;
  } else if (a.layout != "plane") {
    throw Error(ErrorCode::kInvalidArgument, "layout must be plane or interleaved");
  }
  const ScoreVolume v = ScoreVolume::random(a.width, a.height, a.channels, a.seed, layout);
  const BenchReport r = bench(v, a.reps, a.workers);
  const std::string report = bench_to_json(r);
  if (!a.out.empty()) {
    write_file(a.out, report + "\n");
  }
  if (a.pretty) {
    std::printf(
      "%dx%dx%d, %d reps, %d workers (%s)\n", r.width, r.height, r.channels, r.reps, r.workers,
      r.layout.c_str());
    std::printf("sequential  %9.3f ms\n", r.sequential_ms);
    std::printf("parallel    %9.3f ms\n", r.parallel_ms);
    std::printf("speedup     %9.3fx\n", r.speedup);
    std::printf("identical   %s\n", r.outputs_identical ? "yes" : "no");
  } else {
    std::cout << report << "\n";
  }
  return r.outputs_identical ? kExitOk : kExitFailure;
}

// --- simulate --------------------------------------------------------------

struct SimArgs
{
  std::string scenario;
  std::string out;
  bool pretty{false};
};

int run_simulate(const SimArgs & a)
{
  const SimulationScenario sc = load_simulation_scenario(a.scenario);
  const auto events = run_loop(sc.world, sc.injections, sc.loop, sc.apf);
  std::string text;
  for (const auto & e : events) {
    if (a.pretty) {
      char buf[200];
      if (e.kind == LoopEvent::Kind::kReplan) {
        std::snprintf(
          buf, sizeof(buf), "%8.4f  replan  %-4s %s\n", e.t, e.plan_ok ? "ok" : "fail",
          e.note.c_str());
      } else {
        std::snprintf(
          buf, sizeof(buf), "%8.4f  steer   %-14s heading=%7.4f speed=%.2f\n", e.t,
          to_string(e.command.source).c_str(), e.command.heading, e.command.speed_scale);
      }
      text += buf;
    } else {
      text += event_to_json(e) + "\n";
    }
  }
  if (!a.out.empty()) {
    write_file(a.out, text);
  } else {
    std::cout << text;
  }
  return kExitOk;
}

// --- gen-scenarios ---------------------------------------------------------

struct GenArgs
{
  std::string spec;
  std::string out;
  int count{5};
  std::optional<std::uint64_t> seed;
  std::optional<int> corridor_width;
};

int run_gen(const GenArgs & a)
{
  ScenarioSpec spec = a.spec.empty() ? ScenarioSpec{} : parse_scenario_spec(read_file(a.spec));
  if (a.seed) {
    spec.seed = *a.seed;
  }
  if (a.corridor_width) {
    spec.corridor_width = *a.corridor_width;
  }
  const auto scenarios = generate_scenarios(spec, a.count);
  write_scenarios(a.out, spec, scenarios);
  std::cout << json{{"count", scenarios.size()}, {"dir", a.out},
    {"manifest", (fs::path(a.out) / "manifest.json").string()}}.dump() << "\n";
  return kExitOk;
}

// --- render ----------------------------------------------------------------

struct RenderArgs
{
  std::string mask;
  std::string schema;
  std::string trajectory;
  std::string out;
  bool distance{false};
};

int run_render(const RenderArgs & a)
{
  const ClassSchema schema = a.schema.empty() ? default_schema() : load_schema(a.schema);
  const LabelMask mask = load_mask(a.mask, schema);
  Trajectory traj;
  if (!a.trajectory.empty()) {
    traj = parse_trajectory_json(read_file(a.trajectory)).trajectory;
  }
  std::optional<DistanceField> dist;
  if (a.distance) {
    dist = brushfire(to_category_mask(mask, schema));
  }
  render_overlay(a.out, mask, schema, traj, dist ? &*dist : nullptr);
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Semantic-mask local navigation toolkit"};
  app.require_subcommand(1);

  PlanArgs plan;
  auto * plan_cmd = app.add_subcommand("plan", "Run warp, condense, plan and fuse on one mask");
  plan_cmd->add_option("mask,--mask", plan.mask, "Label mask (PGM or 8-bit PNG)")->required();
  plan_cmd->add_option("--config", plan.config, "Pipeline config JSON");
  plan_cmd->add_option("--schema", plan.schema, "Class schema JSON");
  plan_cmd->add_option("--calib", plan.calib, "Four-point calibration JSON");
  plan_cmd->add_option("--out", plan.out, "Output directory");
  plan_cmd->add_option("--dump-fields", plan.dump_fields, "Write field heatmaps here");
  plan_cmd->add_flag("--pretty", plan.pretty, "Human-readable summary");

  EvalArgs eval;
  auto * eval_cmd = app.add_subcommand("eval", "Score predicted masks against ground truth");
  eval_cmd->add_option("--pred", eval.pred, "Prediction directory")->required();
  eval_cmd->add_option("--truth", eval.truth, "Ground-truth directory")->required();
  eval_cmd->add_option("--schema", eval.schema, "Class schema JSON");
  eval_cmd->add_option("--mode", eval.mode, "class, category or object")
  ->check(CLI::IsMember({"class", "category", "object"}));
  eval_cmd->add_option("--out", eval.out, "Write eval.json and eval.csv here");
  eval_cmd->add_option("--workers", eval.workers, "Mask pairs evaluated in parallel")
  ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--pretty", eval.pretty, "Human-readable table");

  BenchArgs bargs;
  auto * bench_cmd = app.add_subcommand("bench-argmax", "Time sequential vs parallel argmax");
  bench_cmd->add_option("--width", bargs.width)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--height", bargs.height)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--channels", bargs.channels)->check(CLI::Range(1, 256));
  bench_cmd->add_option("--reps", bargs.reps)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bargs.workers)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bargs.seed);
  bench_cmd->add_option("--layout", bargs.layout, "plane or interleaved")
  ->check(CLI::IsMember({"plane", "interleaved"}));
  bench_cmd->add_option("--out", bargs.out, "Also write the JSON report here");
  bench_cmd->add_flag("--pretty", bargs.pretty);

  SimArgs sim;
  auto * sim_cmd = app.add_subcommand("simulate", "Run the two-rate fusion loop");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario JSON")->required();
  sim_cmd->add_option("--out", sim.out, "Event log path (default stdout)");
  sim_cmd->add_flag("--pretty", sim.pretty);

  GenArgs gen;
  auto * gen_cmd = app.add_subcommand("gen-scenarios", "Generate synthetic rubble masks");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--count", gen.count)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--spec", gen.spec, "Scenario spec JSON");
  gen_cmd->add_option("--corridor-width", gen.corridor_width);

  RenderArgs rargs;
  auto * render_cmd = app.add_subcommand("render", "Draw a mask with a trajectory overlay");
  render_cmd->add_option("mask,--mask", rargs.mask)->required();
  render_cmd->add_option("--schema", rargs.schema);
  render_cmd->add_option("--trajectory", rargs.trajectory, "Trajectory JSON");
  render_cmd->add_option("--out", rargs.out, ".svg or .ppm")->required();
  render_cmd->add_flag("--distance", rargs.distance, "Add the distance heat layer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (*plan_cmd) {
      return run_plan(plan);
    }
    if (*eval_cmd) {
      return run_eval(eval);
    }
    if (*bench_cmd) {
      return run_bench(bargs);
    }
    if (*sim_cmd) {
      return run_simulate(sim);
    }
    if (*gen_cmd) {
      return run_gen(gen);
    }
    if (*render_cmd) {
      return run_render(rargs);
    }
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
