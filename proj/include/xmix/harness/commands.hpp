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

#ifndef XMIX_HARNESS_COMMANDS_HPP_
#define XMIX_HARNESS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "xmix/demo/provider.hpp"
#include "xmix/train/config.hpp"
#include "xmix/train/trainer.hpp"

namespace xmix::harness {

// Written to <out>/manifest.json before the first epoch; never rewritten.
struct RunManifest {
  nlohmann::ordered_json config;
  std::string config_hash;
  std::string graph_hash;
  std::string build_id;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  std::string simd;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);
RunManifest read_manifest(const std::filesystem::path& run_dir);

std::string build_id();
std::string graph_hash(const RoadGraph& graph);

// Output layout of one training run:
//   manifest.json            RunManifest
//   metrics.csv              one row per epoch, see metrics_csv_header()
//   timing.csv               epoch,seconds (wall clock, not reproducible)
//   checkpoints/final/       end of training
//   checkpoints/epoch_NNNNNN every config.checkpoint_every epochs
struct TrainOutcome {
  std::vector<EpochMetrics> metrics;
  double mean_epoch_seconds = 0.0;
};
TrainOutcome cmd_train(const TrainConfig& config, const std::filesystem::path& out,
                       std::ostream& log);

// Greedy evaluation of <run>/checkpoints/final (or `checkpoint` if given).
// The checkpoint's config hash must match the run manifest, and the
// manifest's hash must match its own config snapshot. Writes eval.csv.
EvalStats cmd_evaluate(const std::filesystem::path& run_dir, int episodes,
                       std::uint64_t seed, std::ostream& log,
                       const std::filesystem::path& checkpoint = {});

struct SweepRow {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  int runs = 0;
  double epoch_seconds = 0.0;
};
// One training run per (count, seed) under <out>/count_NNN/seed_S, each
// followed by `episodes` greedy evaluation runs. Duplicate counts are
// dropped with a warning. Writes <out>/sweep.csv.
std::vector<SweepRow> cmd_sweep_agents(const TrainConfig& base, std::vector<int> counts,
                                       const std::vector<std::uint64_t>& seeds,
                                       int episodes, const std::filesystem::path& out,
                                       std::ostream& log);

// Column order of ablation.csv: leed, fixed-alpha:0.2, fixed-alpha:0.5,
// logit-ppo, ippo.
std::vector<std::string> ablation_variants();

struct AblationResult {
  std::vector<std::string> variants;
  std::vector<std::uint64_t> seeds;
  // rewards[v][s][epoch - 1]: mean agent reward of variant v, seed s.
  std::vector<std::vector<std::vector<double>>> rewards;
};
// Every variant on the same seeds, runs under <out>/<variant>/seed_S.
// ablation.csv holds epoch, then "<variant>@<seed>" per run, then
// "<variant>_mean" per variant.
AblationResult cmd_ablation(const TrainConfig& base, const std::vector<std::uint64_t>& seeds,
                            const std::filesystem::path& out, std::ostream& log,
                            const std::vector<std::string>& variants = ablation_variants());

struct DemoReportOptions {
  int phases = 3;
  int prompts = 10;           // demonstration sets sampled per phase
  int epochs_per_phase = 25;  // training epochs between phases
};
struct DemoReportRow {
  int phase = 0;
  double tokens = 0.0;        // mean completion tokens per prompt
  double validity_rate = 0.0;  // percent of agent routes
  double mean_reward = 0.0;
  double mean_dtw = 0.0;
  int demonstrations = 0;
};
// Trains with `config` between phases and samples `prompts` sets from
// `report_provider` at the start of each phase. Writes demo_report.csv.
std::vector<DemoReportRow> cmd_demo_report(const TrainConfig& config,
                                           ExpertProvider& report_provider,
                                           const DemoReportOptions& options,
                                           const std::filesystem::path& out,
                                           std::ostream& log);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Table read_csv(const std::filesystem::path& path);
void write_csv(const Table& table, const std::filesystem::path& path);

// Trailing moving average; the first window-1 entries average what exists.
std::vector<double> moving_average(const std::vector<double>& v, int window);

// Smooths every column except the first (epoch) of each input, then emits
// epoch plus <column>_mean and <column>_std across inputs. Inputs must
// share a header; differing lengths are cut to the shortest with a warning.
Table cmd_plot_data(const std::vector<std::filesystem::path>& inputs, int window,
                    const std::filesystem::path& out_file, std::ostream& log);

// Writes a fixture graph: "grid:N", "hilly" or "line".
void cmd_gen_graph(const std::string& kind, const std::filesystem::path& out_file);

}  // namespace xmix::harness

#endif  // XMIX_HARNESS_COMMANDS_HPP_
