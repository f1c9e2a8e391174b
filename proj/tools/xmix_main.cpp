// Copyright 2026 The expertmix Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: xmix <subcommand> [options].

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xmix/error.hpp"
#include "xmix/harness/commands.hpp"

namespace fs = std::filesystem;
using namespace xmix;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> graph;
  std::optional<int> agents;
  std::optional<int> epochs;
  std::optional<std::string> provider;
  std::optional<std::string> mock_dir;
  std::string out;
};

void add_common(CLI::App* app, CommonOptions& o, const std::string& default_out) {
  o.out = default_out;
  app->add_option("--config", o.config_path, "JSON config file");
  app->add_option("--set", o.sets, "Dotted override, e.g. train.lr=1e-3 (repeatable)");
  app->add_option("--mode", o.mode, "leed | ippo | fixed-alpha:<a> | logit-ppo");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--graph", o.graph, "Graph JSON file or builtin:grid:N / builtin:hilly");
  app->add_option("--agents", o.agents, "Number of generated agents");
  app->add_option("--epochs", o.epochs, "Training epochs K");
  app->add_option("--provider", o.provider, "oracle | logit | llm | mock | none");
  app->add_option("--mock-dir", o.mock_dir, "Directory of scripted responses");
  app->add_option("--out", o.out, "Output directory")->capture_default_str();
}

// Relative paths are tried against the working directory, then against
// the directory holding the config file.
std::string resolve(const std::string& path, const fs::path& config_dir) {
  if (path.empty() || path.starts_with("builtin:")) return path;
  const fs::path p(path);
  if (p.is_absolute() || fs::exists(p) || config_dir.empty()) return path;
  const fs::path alt = config_dir / p;
  return fs::exists(alt) ? alt.string() : path;
}

TrainConfig load_config(const CommonOptions& o) {
  nlohmann::json doc = nlohmann::json::object();
  fs::path config_dir;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw NotFoundError("config file not found: " + o.config_path);
    doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw FormatError(o.config_path + ": not valid JSON");
    config_dir = fs::path(o.config_path).parent_path();
  }
  for (const std::string& s : o.sets) apply_override(doc, s);
  TrainConfig c = config_from_json(doc);
  if (o.mode) c.mode = parse_mode(*o.mode, &c.fixed_alpha);
  if (o.seed) c.seed = *o.seed;
  if (o.graph) c.graph = *o.graph;
  if (o.agents) {
    c.agents.count = *o.agents;
    c.explicit_agents.clear();
  }
  if (o.epochs) c.epochs = *o.epochs;
  if (o.provider) c.provider = parse_provider(*o.provider);
  if (o.mock_dir) c.mock_dir = *o.mock_dir;
  c.graph = resolve(c.graph, o.graph ? fs::path() : config_dir);
  c.mock_dir = resolve(c.mock_dir, o.mock_dir ? fs::path() : config_dir);
  c.validate();
  return c;
}

std::vector<std::uint64_t> seed_list(const std::vector<std::uint64_t>& given,
                                     const TrainConfig& c) {
  return given.empty() ? std::vector<std::uint64_t>{c.seed} : given;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-agent PPO with expert demonstrations"};
  app.require_subcommand(1);

  CommonOptions train_o, eval_o, sweep_o, abl_o, report_o;

  auto* train = app.add_subcommand("train", "Train one run");
  add_common(train, train_o, "runs/train");

  auto* evaluate = app.add_subcommand("evaluate", "Greedy evaluation of a trained run");
  std::string run_dir = "runs/train", checkpoint;
  int episodes = 20;
  std::uint64_t eval_seed = 0;
  evaluate->add_option("--run", run_dir, "Run directory (holds manifest.json)")
      ->capture_default_str();
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint directory (default: final)");
  evaluate->add_option("--episodes", episodes, "Evaluation episodes")->capture_default_str();
  evaluate->add_option("--seed", eval_seed, "Evaluation seed")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep-agents", "Train and evaluate per agent count");
  add_common(sweep, sweep_o, "runs/sweep");
  std::vector<int> counts{5, 10, 15, 20};
  std::vector<std::uint64_t> sweep_seeds;
  int sweep_episodes = 20;
  sweep->add_option("--counts", counts, "Agent counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--seeds", sweep_seeds, "Seeds (default: --seed)")->delimiter(',');
  sweep->add_option("--episodes", sweep_episodes, "Evaluation episodes per run")
      ->capture_default_str();

  auto* ablation = app.add_subcommand("ablation", "Compare training variants on shared seeds");
  add_common(ablation, abl_o, "runs/ablation");
  std::vector<std::uint64_t> abl_seeds;
  std::vector<std::string> variants = harness::ablation_variants();
  ablation->add_option("--seeds", abl_seeds, "Seeds (default: --seed)")->delimiter(',');
  ablation->add_option("--variants", variants, "Variants, in column order")
      ->delimiter(',')
      ->capture_default_str();

  auto* report = app.add_subcommand("demo-report", "Demonstration quality per refinement phase");
  add_common(report, report_o, "runs/demo-report");
  harness::DemoReportOptions ro;
  std::string report_provider = "llm";
  report->add_option("--phases", ro.phases, "Refinement phases")->capture_default_str();
  report->add_option("--prompts", ro.prompts, "Demonstration sets per phase")
      ->capture_default_str();
  report->add_option("--epochs-per-phase", ro.epochs_per_phase,
                     "Training epochs between phases")
      ->capture_default_str();
  report->add_option("--report-provider", report_provider,
                     "Provider whose demonstrations are assessed")
      ->capture_default_str();

  auto* plot = app.add_subcommand("plot-data", "Smooth and aggregate metrics CSVs");
  std::vector<std::string> plot_inputs;
  int window = 10;
  std::string plot_out = "plot.csv";
  plot->add_option("inputs", plot_inputs, "metrics CSV files")->required();
  plot->add_option("--window", window, "Moving-average window")->capture_default_str();
  plot->add_option("--out", plot_out, "Output CSV")->capture_default_str();

  auto* gen = app.add_subcommand("gen-graph", "Write a fixture graph as JSON");
  std::string gen_kind;
  std::string gen_out;
  gen->add_option("kind", gen_kind, "grid:N | hilly | line")->required();
  gen->add_option("--out", gen_out, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const TrainConfig c = load_config(train_o);
      harness::cmd_train(c, train_o.out, std::cout);
    } else if (evaluate->parsed()) {
      const EvalStats s = harness::cmd_evaluate(run_dir, episodes, eval_seed, std::cout,
                                                checkpoint);
      std::cout << "mean " << s.mean << " std " << s.stddev << '\n';
    } else if (sweep->parsed()) {
      const TrainConfig c = load_config(sweep_o);
      const auto rows = harness::cmd_sweep_agents(c, counts, seed_list(sweep_seeds, c),
                                                  sweep_episodes, sweep_o.out, std::cout);
      for (const auto& r : rows) {
        std::cout << "agents " << r.count << ": mean " << r.mean << " std " << r.stddev
                  << " epoch_seconds " << r.epoch_seconds << '\n';
      }
    } else if (ablation->parsed()) {
      const TrainConfig c = load_config(abl_o);
      harness::cmd_ablation(c, seed_list(abl_seeds, c), abl_o.out, std::cout, variants);
    } else if (report->parsed()) {
      const TrainConfig c = load_config(report_o);
      TrainConfig rc = c;
      rc.provider = parse_provider(report_provider);
      rc.mode = TrainMode::kLeed;
      rc.fallback = ProviderKind::kNone;
      auto provider = make_provider(rc);
      if (!provider) throw PreconditionError("demo-report: a report provider is required");
      harness::cmd_demo_report(c, *provider, ro, report_o.out, std::cout);
    } else if (plot->parsed()) {
      std::vector<fs::path> inputs(plot_inputs.begin(), plot_inputs.end());
      harness::cmd_plot_data(inputs, window, plot_out, std::cerr);
    } else if (gen->parsed()) {
      harness::cmd_gen_graph(gen_kind, gen_out);
    }
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
