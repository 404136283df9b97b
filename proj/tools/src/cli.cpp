// Copyright 2026 The Kinfeas Authors
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


#include "cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kinfeas/agent.hpp"
#include "kinfeas/checkpoint.hpp"
#include "kinfeas/error.hpp"
#include "kinfeas/metrics.hpp"
#include "kinfeas/robot.hpp"
#include "kinfeas/suite.hpp"
#include "kinfeas/tasks.hpp"
#include "kinfeas/trainer.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace kinfeas::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError(code, msg); }

fs::path resolve_out(const std::string& flag) {
  if (const char* env = std::getenv("KINFEAS_OUT"); env != nullptr && *env != '\0') return env;
  return flag;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail(kUnwritable, "cannot create output directory '" + dir.string() + "'");
}

RobotModel robot_from_path(const std::string& path) {
  if (path.empty()) fail(kBadConfig, "--robot is required");
  if (!fs::is_regular_file(path)) fail(kMissingFile, "robot file not found: " + path);
  try {
    return load_robot(path);
  } catch (const IoError& e) {
    fail(kMissingFile, e.what());
  }
}

RobotModel robot_from_json(const json& j) {
  try {
    return j.get<RobotModel>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed robot in manifest: ") + e.what());
  }
}

Checkpoint checkpoint_from_path(const std::string& path, const RobotModel& model) {
  if (!fs::is_regular_file(path)) fail(kMissingFile, "checkpoint file not found: " + path);
  Checkpoint c;
  try {
    c = load_checkpoint(path);
  } catch (const IoError& e) {
    fail(kMissingFile, e.what());
  }
  try {
    check_compatible(c, model);
  } catch (const ConfigError& e) {
    fail(kMismatch, path + ": " + e.what());
  }
  return c;
}

json env_config_json(const EnvConfig& c) {
  return {{"dt", c.dt},
          {"step_cap", c.step_cap},
          {"train_fail_thresh", c.train_fail_thresh},
          {"eval_fail_thresh", c.eval_fail_thresh},
          {"lambda", c.lambda},
          {"action_noise_std", c.action_noise_std},
          {"success_pos_tol", c.success_pos_tol},
          {"success_ang_tol", c.success_ang_tol},
          {"ik",
           {{"damping", c.ik.damping},
            {"max_iterations", c.ik.max_iterations},
            {"random_restarts", c.ik.random_restarts},
            {"tol_pos", c.ik.tol_pos},
            {"tol_ang", c.ik.tol_ang}}},
          {"motion",
           {{"min_lin_vel", c.motion.min_lin_vel},
            {"max_lin_vel", c.motion.max_lin_vel},
            {"max_ang_vel", c.motion.max_ang_vel},
            {"dt", c.motion.dt}}}};
}

struct TaskFlags {
  bool restricted = false;
  double goal_min = 1.0;
  double goal_max = 5.0;

  void add(CLI::App* cmd) {
    cmd->add_flag("--restricted", restricted, "Use restricted heights for goal reaching");
    cmd->add_option("--goal-min", goal_min, "Minimum goal distance for goal reaching (m)");
    cmd->add_option("--goal-max", goal_max, "Maximum goal distance for goal reaching (m)");
  }

  TaskSpec resolve(const std::string& name) const {
    TaskSpec t = task_by_name(restricted && name == "ggr" ? "ggr-restr" : name);
    t.goal_distance = {goal_min, goal_max};
    t.validate();
    return t;
  }
};

json task_json(const TaskSpec& t) {
  return {{"name", t.name}, {"goal_distance", {t.goal_distance.lo, t.goal_distance.hi}}, {"episodes", t.episodes}};
}

TaskSpec task_from_json(const json& j) {
  TaskSpec t = task_by_name(j.at("name").get<std::string>());
  const auto d = j.at("goal_distance").get<std::vector<double>>();
  if (d.size() != 2) throw ConfigError("manifest goal_distance must have two entries");
  t.goal_distance = {d[0], d[1]};
  t.episodes = j.value("episodes", t.episodes);
  t.validate();
  return t;
}

json read_manifest_config(const std::string& path, const std::string& command) {
  if (!fs::is_regular_file(path)) fail(kMissingFile, "manifest not found: " + path);
  json m;
  try {
    m = json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(kBadConfig, "manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (m.value("command", std::string()) != command) {
    fail(kBadConfig, "manifest '" + path + "' was written by a different command");
  }
  return m.at("config");
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
  std::string robot;
  std::string task = "ggr";
  TaskFlags task_flags;
  std::uint64_t seed = 0;
  long steps = 1000000;
  std::string out = "runs/train";
  std::string entropy = "learn";
  SacConfig sac;
  long eval_interval = 10000;
  int eval_episodes = 20;
  long checkpoint_interval = 100000;
  std::string manifest;
  bool quiet = false;
};

void add_train(CLI::App& app, TrainArgs& a) {
  CLI::App* c = app.add_subcommand("train", "Train a SAC base policy");
  c->add_option("--robot", a.robot, "Robot JSON file");
  c->add_option("--task", a.task, "Training task")->capture_default_str();
  a.task_flags.add(c);
  c->add_option("--seed", a.seed, "Master seed")->capture_default_str();
  c->add_option("--steps", a.steps, "Environment steps")->capture_default_str();
  c->add_option("--out", a.out, "Output directory (KINFEAS_OUT overrides)")->capture_default_str();
  c->add_option("--batch-size", a.sac.batch_size)->capture_default_str();
  c->add_option("--gamma", a.sac.gamma)->capture_default_str();
  c->add_option("--tau", a.sac.tau)->capture_default_str();
  c->add_option("--lr", a.sac.lr)->capture_default_str();
  c->add_option("--lr-decay", a.sac.lr_decay)->capture_default_str();
  c->add_option("--entropy", a.entropy, "\"learn\" or a fixed temperature")->capture_default_str();
  c->add_option("--warmup", a.sac.warmup_steps, "Uniform-random warmup steps")->capture_default_str();
  c->add_option("--lambda", a.sac.lambda, "Action-magnitude penalty")->capture_default_str();
  c->add_option("--ik-fail-thresh", a.sac.ik_fail_thresh)->capture_default_str();
  c->add_option("--eval-interval", a.eval_interval)->capture_default_str();
  c->add_option("--eval-episodes", a.eval_episodes)->capture_default_str();
  c->add_option("--checkpoint-interval", a.checkpoint_interval)->capture_default_str();
  c->add_option("--manifest", a.manifest, "Re-run the resolved config of an earlier manifest");
  c->add_flag("--quiet", a.quiet, "Suppress progress output");
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  RobotModel model;
  std::string robot_path;
  TaskSpec task;
  SacConfig sac = a.sac;
  std::uint64_t seed = a.seed;
  long steps = a.steps, eval_interval = a.eval_interval, ckpt_interval = a.checkpoint_interval;
  int eval_episodes = a.eval_episodes;
  if (!a.manifest.empty()) {
    const json cfg = read_manifest_config(a.manifest, "train");
    robot_path = cfg.at("robot_path").get<std::string>();
    model = robot_from_json(cfg.at("robot"));
    task = task_from_json(cfg.at("task"));
    sac = cfg.at("sac").get<SacConfig>();
    seed = cfg.at("seed").get<std::uint64_t>();
    steps = cfg.at("steps").get<long>();
    eval_interval = cfg.at("eval_interval").get<long>();
    eval_episodes = cfg.at("eval_episodes").get<int>();
    ckpt_interval = cfg.at("checkpoint_interval").get<long>();
  } else {
    robot_path = a.robot;
    model = robot_from_path(a.robot);
    task = a.task_flags.resolve(a.task);
    if (a.entropy == "learn") {
      sac.entropy = EntropyMode::kLearned;
    } else {
      sac.entropy = EntropyMode::kFixed;
      try {
        sac.fixed_alpha = std::stod(a.entropy);
      } catch (const std::exception&) {
        fail(kBadConfig, "--entropy must be \"learn\" or a number");
      }
    }
  }
  if (steps < 0) fail(kBadConfig, "--steps must be non-negative");
  if (const auto bad = sac.search_range_violations(); !bad.empty()) fail(kBadConfig, "invalid SAC config: " + bad.front());

  const EnvConfig env_cfg;
  const json config{{"robot_path", robot_path},
                    {"robot", model},
                    {"task", task_json(task)},
                    {"seed", seed},
                    {"steps", steps},
                    {"sac", sac},
                    {"eval_interval", eval_interval},
                    {"eval_episodes", eval_episodes},
                    {"checkpoint_interval", ckpt_interval},
                    {"env", env_config_json(env_cfg)}};

  const fs::path dir = resolve_out(a.out);
  ensure_dir(dir);
  const fs::path curve_path = dir / "curve.csv";
  write_text(dir / "manifest.json",
             make_manifest("train", config, dir, {"manifest.json", "curve.csv", "checkpoint_final.json"}).dump(2) + "\n");
  write_text(curve_path, curve_csv({}));

  TrainOptions opts;
  opts.total_steps = steps;
  opts.task = task;
  opts.eval_interval = eval_interval;
  opts.eval_episodes = eval_episodes;
  opts.checkpoint_interval = ckpt_interval;
  opts.checkpoint_dir = dir;
  std::vector<CurvePoint> curve;
  opts.on_eval = [&](const CurvePoint& p) {
    curve.push_back(p);
    write_text(curve_path, curve_csv(curve));
    if (!a.quiet) {
      out << "step " << p.step << " zero_fail_share " << p.eval_zero_fail_share << " mean_return "
          << p.mean_return << std::endl;
    }
  };
  const TrainResult r = train(model, env_cfg, sac, opts, seed);
  write_text(curve_path, curve_csv(r.curve));
  if (!a.quiet) out << "trained " << steps << " steps over " << r.episodes << " episodes -> " << dir.string() << "\n";
  return kOk;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
  std::string robot;
  std::vector<std::string> checkpoints;
  bool baseline = false;
  int seeds = 1;
  std::vector<std::string> tasks;
  TaskFlags task_flags;
  int episodes = 50;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = "runs/eval";
  std::string label;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  CLI::App* c = app.add_subcommand("eval", "Evaluate checkpoints or the baseline on the task suite");
  c->add_option("--robot", a.robot, "Robot JSON file");
  auto* ck = c->add_option("--checkpoint", a.checkpoints, "Checkpoint file, one per seed");
  auto* bl = c->add_flag("--baseline", a.baseline, "Evaluate the velocity-replicating baseline");
  ck->excludes(bl);
  c->add_option("--seeds", a.seeds, "Number of baseline seeds")->capture_default_str();
  c->add_option("--task", a.tasks, "Tasks (repeatable or comma separated); default: all five")->delimiter(',');
  a.task_flags.add(c);
  c->add_option("--episodes", a.episodes, "Episodes per task and seed")->capture_default_str();
  c->add_option("--seed", a.seed, "Master seed for episode streams")->capture_default_str();
  c->add_option("--jobs", a.jobs, "Worker threads")->capture_default_str();
  c->add_option("--out", a.out, "Output directory (KINFEAS_OUT overrides)")->capture_default_str();
  c->add_option("--label", a.label, "Row label in the markdown table");
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (!a.baseline && a.checkpoints.empty()) fail(kBadConfig, "eval needs --checkpoint or --baseline");
  if (a.episodes <= 0 || a.seeds <= 0 || a.jobs <= 0) fail(kBadConfig, "--episodes, --seeds and --jobs must be positive");
  const RobotModel model = robot_from_path(a.robot);

  std::vector<Mlp<float>> actors;
  for (const std::string& p : a.checkpoints) actors.push_back(checkpoint_from_path(p, model).actor);

  SuiteOptions opts;
  opts.agent = !a.label.empty() ? a.label : (a.baseline ? "baseline" : "sac");
  opts.jobs = a.jobs;
  for (const std::string& name : a.tasks.empty() ? standard_task_names() : a.tasks) {
    TaskSpec t = a.task_flags.resolve(name);
    t.episodes = a.episodes;
    opts.tasks.push_back(t);
  }
  const std::size_t n_seeds = a.baseline ? static_cast<std::size_t>(a.seeds) : actors.size();
  for (std::size_t i = 0; i < n_seeds; ++i) opts.seeds.push_back(std::to_string(i));

  AgentFactory factory;
  if (a.baseline) {
    factory = [](std::size_t) { return std::make_unique<BaselineAgent>(); };
  } else {
    factory = [&actors, &model](std::size_t i) { return std::make_unique<PolicyAgent>(actors[i], model); };
  }
  const EnvConfig env_cfg;
  const SuiteReport report = run_suite(opts, make_env_runner(model, env_cfg, factory, a.seed));

  json tasks = json::array();
  for (const TaskSpec& t : opts.tasks) tasks.push_back(task_json(t));
  const json config{{"robot_path", a.robot},   {"robot", model},       {"checkpoints", a.checkpoints},
                    {"baseline", a.baseline},  {"seeds", n_seeds},     {"tasks", tasks},
                    {"episodes", a.episodes},  {"seed", a.seed},       {"agent", opts.agent},
                    {"env", env_config_json(env_cfg)}};
  const fs::path dir = resolve_out(a.out);
  ensure_dir(dir);
  const std::string md = report_markdown({report});
  write_text(dir / "report.csv", report_csv(report));
  write_text(dir / "report.md", md);
  write_text(dir / "manifest.json",
             make_manifest("eval", config, dir, {"manifest.json", "report.csv", "report.md"}).dump(2) + "\n");
  out << md;
  return kOk;
}

// ---- rollout -------------------------------------------------------------

struct RolloutArgs {
  std::string robot;
  std::string checkpoint;
  bool baseline = false;
  std::string task = "ggr";
  TaskFlags task_flags;
  std::uint64_t seed = 0;
  std::string export_path;
  std::string svg_path;
  int steps = -1;
  bool verify = false;
};

void add_rollout(CLI::App& app, RolloutArgs& a) {
  CLI::App* c = app.add_subcommand("rollout", "Roll out one episode and export its trace");
  c->add_option("--robot", a.robot, "Robot JSON file");
  auto* ck = c->add_option("--checkpoint", a.checkpoint, "Checkpoint file");
  auto* bl = c->add_flag("--baseline", a.baseline, "Use the velocity-replicating baseline");
  ck->excludes(bl);
  c->add_option("--task", a.task)->capture_default_str();
  a.task_flags.add(c);
  c->add_option("--seed", a.seed)->capture_default_str();
  c->add_option("--export", a.export_path, "JSONL trace path")->required();
  c->add_option("--svg", a.svg_path, "SVG plot path (default: trace path with .svg)");
  c->add_option("--steps", a.steps, "Step limit; negative runs to termination")->capture_default_str();
  c->add_flag("--verify", a.verify, "Replay the written trace and check it matches");
}

void open_or_fail(std::ofstream& f, const fs::path& p) {
  f.open(p, std::ios::binary | std::ios::trunc);
  if (!f) fail(kUnwritable, "cannot write '" + p.string() + "'");
}

int cmd_rollout(const RolloutArgs& a, std::ostream& out) {
  if (!a.baseline && a.checkpoint.empty()) fail(kBadConfig, "rollout needs --checkpoint or --baseline");
  const RobotModel model = robot_from_path(a.robot);
  std::unique_ptr<Agent> agent;
  if (a.baseline) {
    agent = std::make_unique<BaselineAgent>();
  } else {
    agent = std::make_unique<PolicyAgent>(checkpoint_from_path(a.checkpoint, model).actor, model);
  }
  const TaskSpec task = a.task_flags.resolve(a.task);
  const fs::path trace_path = a.export_path;
  fs::path svg_path = a.svg_path;
  if (svg_path.empty()) svg_path = fs::path(trace_path).replace_extension(".svg");
  std::ofstream trace_file, svg_file;
  open_or_fail(trace_file, trace_path);
  open_or_fail(svg_file, svg_path);

  const EnvConfig env_cfg;
  Env env(model, env_cfg);
  const Rng episode_rng = eval_episode_rng(a.seed, 0, task.name, 0);
  const EpisodeTrace trace = run_episode_trace(env, *agent, task, episode_rng, a.steps);
  const TraceHeader header{model.name, task.name, agent->label(), a.seed, episode_rng.state(), env_cfg.dt};
  write_trace_jsonl(trace_file, header, trace);
  svg_file << render_trace_svg(trace);
  trace_file.close();
  svg_file.close();
  if (!trace_file || !svg_file) fail(kUnwritable, "failed writing rollout outputs");

  const EpisodeResult r = summarize_episode(trace);
  out << "steps " << r.steps << " ik_failures " << r.ik_failures << " success " << (r.success ? "yes" : "no")
      << " max_deviation_m " << r.max_deviation << "\n";
  if (a.verify) {
    std::ifstream in(trace_path, std::ios::binary);
    const ReplayCheck check = replay_trace(model, env_cfg, read_trace_jsonl(in));
    out << "replay " << (check.matches ? "matches" : "differs: " + check.mismatch) << " (" << check.steps_checked
        << " steps)\n";
    if (!check.matches) return kBadConfig;
  }
  return kOk;
}

// ---- report --------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

void add_report(CLI::App& app, ReportArgs& a) {
  CLI::App* c = app.add_subcommand("report", "Merge report CSVs into one markdown table");
  c->add_option("--in", a.inputs, "Report CSV, optionally as label=path")->required();
  c->add_option("--out", a.out, "Directory for report.md (KINFEAS_OUT overrides)");
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<SuiteReport> reports;
  for (const std::string& spec : a.inputs) {
    const auto eq = spec.find('=');
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const std::string label = eq == std::string::npos ? fs::path(path).parent_path().filename().string()
                                                      : spec.substr(0, eq);
    if (!fs::is_regular_file(path)) fail(kMissingFile, "report file not found: " + path);
    reports.push_back(parse_report_csv(read_text(path), label.empty() ? path : label));
  }
  const std::string md = report_markdown(reports);
  fs::path dir = a.out;
  if (const char* env = std::getenv("KINFEAS_OUT"); env != nullptr && *env != '\0') dir = env;
  if (!dir.empty()) {
    ensure_dir(dir);
    write_text(dir / "report.md", md);
  }
  out << md;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learned base control for kinematically feasible mobile manipulation"};
  app.name("kinfeas");
  app.require_subcommand(1);
  TrainArgs train_args;
  EvalArgs eval_args;
  RolloutArgs rollout_args;
  ReportArgs report_args;
  add_train(app, train_args);
  add_eval(app, eval_args);
  add_rollout(app, rollout_args);
  add_report(app, report_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (app.got_subcommand("train")) return cmd_train(train_args, out);
    if (app.got_subcommand("eval")) return cmd_eval(eval_args, out);
    if (app.got_subcommand("rollout")) return cmd_rollout(rollout_args, out);
    return cmd_report(report_args, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUnwritable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }
}

}  // namespace kinfeas::cli
