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


#include "kinfeas/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "kinfeas/error.hpp"

namespace kinfeas {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

SeedRow summarize_seed(const std::string& task, const std::string& seed,
                       const std::vector<EpisodeResult>& results) {
  SeedRow row{task, seed, static_cast<int>(results.size())};
  if (results.empty()) return row;
  int zero = 0, close = 0, feasible = 0;
  double dev_sum = 0.0;
  for (const EpisodeResult& r : results) {
    zero += r.zero_failures ? 1 : 0;
    close += r.within_threshold ? 1 : 0;
    dev_sum += r.mean_deviation_over_success_steps * r.success_steps;
    feasible += r.success_steps;
  }
  const double n = static_cast<double>(results.size());
  row.zero_fail_share = zero / n;
  row.dev5cm_share = close / n;
  row.mean_dev_m = feasible > 0 ? dev_sum / feasible : 0.0;
  return row;
}

std::vector<AggregateRow> aggregate(const std::vector<SeedRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<const SeedRow*>> groups;
  for (const SeedRow& r : rows) {
    auto [it, inserted] = index.emplace(r.task, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&r);
  }
  for (const auto& g : groups) {
    AggregateRow a;
    a.task = g.front()->task;
    a.seeds = static_cast<int>(g.size());
    const double n = static_cast<double>(g.size());
    for (const SeedRow* r : g) {
      a.zero_fail_mean += r->zero_fail_share / n;
      a.dev5cm_mean += r->dev5cm_share / n;
      a.mean_dev_m += r->mean_dev_m / n;
    }
    for (const SeedRow* r : g) {
      a.zero_fail_std += std::pow(r->zero_fail_share - a.zero_fail_mean, 2) / n;
      a.dev5cm_std += std::pow(r->dev5cm_share - a.dev5cm_mean, 2) / n;
    }
    a.zero_fail_std = std::sqrt(a.zero_fail_std);
    a.dev5cm_std = std::sqrt(a.dev5cm_std);
    out.push_back(a);
  }
  return out;
}

SuiteReport run_suite(const SuiteOptions& options, const EpisodeRunner& runner) {
  if (options.seeds.empty()) throw ConfigError("evaluation needs at least one seed");
  for (const TaskSpec& t : options.tasks) t.validate();

  struct Job {
    std::size_t task;
    std::size_t seed;
    int episode;
    std::size_t slot;
  };
  std::vector<Job> jobs;
  std::vector<std::size_t> offsets;  // first slot of each (task, seed) group
  for (std::size_t t = 0; t < options.tasks.size(); ++t) {
    for (std::size_t s = 0; s < options.seeds.size(); ++s) {
      offsets.push_back(jobs.size());
      for (int e = 0; e < options.tasks[t].episodes; ++e) jobs.push_back({t, s, e, jobs.size()});
    }
  }
  std::vector<EpisodeResult> results(jobs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& j = jobs[i];
        results[j.slot] = runner(options.tasks[j.task], j.seed, j.episode);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(options.jobs, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  SuiteReport report;
  report.agent = options.agent;
  std::size_t group = 0;
  for (const TaskSpec& t : options.tasks) {
    for (const std::string& seed : options.seeds) {
      const std::size_t begin = offsets[group++];
      const std::vector<EpisodeResult> slice(results.begin() + static_cast<std::ptrdiff_t>(begin),
                                             results.begin() + static_cast<std::ptrdiff_t>(begin + t.episodes));
      report.rows.push_back(summarize_seed(t.name, seed, slice));
    }
  }
  report.aggregates = aggregate(report.rows);
  return report;
}

Rng eval_episode_rng(std::uint64_t master_seed, std::size_t seed_index, const std::string& task,
                     int episode) {
  return Rng(master_seed)
      .split(static_cast<std::uint64_t>(seed_index))
      .split(task)
      .split("eval-episode-" + std::to_string(episode));
}

EpisodeRunner make_env_runner(const RobotModel& model, const EnvConfig& config, AgentFactory factory,
                              std::uint64_t master_seed) {
  return [model, config, factory = std::move(factory), master_seed](const TaskSpec& task, std::size_t seed,
                                                                      int episode) {
    Env env(model, config);
    std::unique_ptr<Agent> agent = factory(seed);
    return run_episode(env, *agent, task, eval_episode_rng(master_seed, seed, task.name, episode));
  };
}

std::string report_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "task,seed,zero_fail_share,dev5cm_share,mean_dev_m\n";
  for (const SeedRow& r : report.rows) {
    out << r.task << ',' << r.seed << ',' << fmt("%.6f", r.zero_fail_share) << ','
        << fmt("%.6f", r.dev5cm_share) << ',' << fmt("%.6f", r.mean_dev_m) << '\n';
  }
  for (const AggregateRow& a : report.aggregates) {
    out << a.task << ",mean," << fmt("%.6f", a.zero_fail_mean) << ',' << fmt("%.6f", a.dev5cm_mean) << ','
        << fmt("%.6f", a.mean_dev_m) << '\n';
    out << a.task << ",std," << fmt("%.6f", a.zero_fail_std) << ',' << fmt("%.6f", a.dev5cm_std) << ",\n";
  }
  return out.str();
}

SuiteReport parse_report_csv(const std::string& text, const std::string& agent) {
  SuiteReport report;
  report.agent = agent;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("task,seed,zero_fail_share", 0) != 0) {
    throw ConfigError("report CSV has an unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() < 4) throw ConfigError("report CSV row has too few columns: " + line);
    if (cells[1] == "mean" || cells[1] == "std") continue;
    try {
      SeedRow r{cells[0], cells[1]};
      r.zero_fail_share = std::stod(cells[2]);
      r.dev5cm_share = std::stod(cells[3]);
      r.mean_dev_m = cells.size() > 4 ? std::stod(cells[4]) : 0.0;
      report.rows.push_back(r);
    } catch (const std::exception&) {
      throw ConfigError("report CSV row has a non-numeric share: " + line);
    }
  }
  report.aggregates = aggregate(report.rows);
  return report;
}

std::string report_markdown(const std::vector<SuiteReport>& reports) {
  std::vector<std::string> tasks;
  for (const SuiteReport& r : reports) {
    for (const AggregateRow& a : r.aggregates) {
      if (std::find(tasks.begin(), tasks.end(), a.task) == tasks.end()) tasks.push_back(a.task);
    }
  }
  std::ostringstream out;
  out << "| agent |";
  for (const auto& t : tasks) out << ' ' << t << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < tasks.size(); ++i) out << "---|";
  out << '\n';
  for (const SuiteReport& r : reports) {
    out << "| " << r.agent << " |";
    for (const auto& t : tasks) {
      auto it = std::find_if(r.aggregates.begin(), r.aggregates.end(),
                             [&](const AggregateRow& a) { return a.task == t; });
      if (it == r.aggregates.end()) {
        out << " - |";
      } else {
        out << ' ' << fmt("%.1f", 100.0 * it->zero_fail_mean) << " (" << fmt("%.1f", 100.0 * it->dev5cm_mean)
            << ") |";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kinfeas
