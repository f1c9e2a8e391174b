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

#include "xmix/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "xmix/dtw/dtw.hpp"
#include "xmix/env/fixtures.hpp"
#include "xmix/error.hpp"
#include "xmix/simd/kernels.hpp"

namespace xmix::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) { return std::isnan(v) ? "nan" : format_number(v); }

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string seed_dir(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::string epoch_dir(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "epoch_%06d", epoch);
  return buf;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TrainOutcome cmd_train(const TrainConfig& config, const std::filesystem::path& out,
                       std::ostream& log) {
  config.validate();
  Scenario scenario = make_scenario(config);
  std::filesystem::create_directories(out);

  RunManifest manifest;
  manifest.config = config_to_json(config);
  manifest.config_hash = hex64(config_hash(config));
  manifest.graph_hash = graph_hash(scenario.graph);
  manifest.build_id = build_id();
  manifest.seeds = {config.seed};
  manifest.out_dir = out.string();
  manifest.simd = std::string(isa_name(simd::active().isa));
  {
    auto f = open_out(out / "manifest.json");
    f << manifest_to_json(manifest).dump(2) << '\n';
  }

  Trainer trainer(config, std::move(scenario));
  auto metrics = open_out(out / "metrics.csv");
  auto timing = open_out(out / "timing.csv");
  metrics << metrics_csv_header() << '\n';
  timing << "epoch,seconds\n";

  TrainOutcome outcome;
  const int report_every = std::max(1, config.epochs / 10);
  trainer.run([&](const EpochMetrics& m) {
    metrics << metrics_csv_row(m) << '\n';
    metrics.flush();
    timing << m.epoch << ',' << num(m.elapsed) << '\n';
    if (config.checkpoint_every > 0 && m.epoch % config.checkpoint_every == 0) {
      trainer.save_checkpoint(out / "checkpoints" / epoch_dir(m.epoch), m.epoch);
    }
    if (m.epoch % report_every == 0 || m.epoch == config.epochs) {
      log << "epoch " << m.epoch << '/' << config.epochs
          << " reward_a=" << num(m.mean_reward_a) << " alpha=" << num(m.alpha_mean)
          << " validity=" << num(m.validity_rate) << '\n';
    }
    outcome.mean_epoch_seconds += m.elapsed;
    outcome.metrics.push_back(m);
  });
  trainer.save_checkpoint(out / "checkpoints" / "final", config.epochs);
  if (!outcome.metrics.empty()) {
    outcome.mean_epoch_seconds /= static_cast<double>(outcome.metrics.size());
  }
  return outcome;
}

EvalStats cmd_evaluate(const std::filesystem::path& run_dir, int episodes,
                       std::uint64_t seed, std::ostream& log,
                       const std::filesystem::path& checkpoint) {
  if (episodes < 1) throw PreconditionError("evaluate: episodes must be >= 1");
  const RunManifest manifest = read_manifest(run_dir);
  const TrainConfig config = config_from_json(manifest.config);
  const std::string hash = hex64(config_hash(config));
  if (hash != manifest.config_hash) {
    throw FormatError("manifest config hash " + manifest.config_hash +
                      " does not match its config (" + hash + ")");
  }
  const auto ck_dir = checkpoint.empty() ? run_dir / "checkpoints" / "final" : checkpoint;
  const LoadedCheckpoint ck = load_checkpoint(ck_dir);
  if (hex64(ck.config_hash) != hash) {
    throw FormatError("checkpoint " + ck_dir.string() + " was trained with config " +
                      hex64(ck.config_hash) + ", manifest says " + hash);
  }
  const Scenario scenario = make_scenario(config);
  if (graph_hash(scenario.graph) != manifest.graph_hash) {
    throw FormatError("graph " + config.graph + " changed since training");
  }
  EvalStats stats = evaluate_policies(ck.policies, scenario, config.env, episodes, seed);
  auto f = open_out(run_dir / "eval.csv");
  f << "episode,mean_reward\n";
  for (std::size_t e = 0; e < stats.episode_rewards.size(); ++e) {
    f << e + 1 << ',' << num(stats.episode_rewards[e]) << '\n';
  }
  log << "evaluate " << run_dir.string() << ": mean=" << num(stats.mean)
      << " std=" << num(stats.stddev) << " episodes=" << episodes << '\n';
  return stats;
}

std::vector<SweepRow> cmd_sweep_agents(const TrainConfig& base, std::vector<int> counts,
                                       const std::vector<std::uint64_t>& seeds,
                                       int episodes, const std::filesystem::path& out,
                                       std::ostream& log) {
  if (counts.empty()) throw PreconditionError("sweep-agents: no agent counts given");
  if (seeds.empty()) throw PreconditionError("sweep-agents: no seeds given");
  if (!base.explicit_agents.empty()) {
    throw PreconditionError("sweep-agents: explicit agent lists cannot be resized");
  }
  std::vector<int> unique;
  std::set<int> seen;
  for (int c : counts) {
    if (c < 1) throw PreconditionError("sweep-agents: agent count must be >= 1");
    if (!seen.insert(c).second) {
      log << "warning: duplicate agent count " << c << " ignored\n";
      continue;
    }
    unique.push_back(c);
  }

  std::vector<SweepRow> rows;
  for (int count : unique) {
    SweepRow row;
    row.count = count;
    std::vector<double> samples;
    double seconds = 0.0;
    for (std::uint64_t seed : seeds) {
      TrainConfig cfg = base;
      cfg.agents.count = count;
      cfg.seed = seed;
      char name[32];
      std::snprintf(name, sizeof(name), "count_%03d", count);
      const auto dir = out / name / seed_dir(seed);
      const TrainOutcome t = cmd_train(cfg, dir, log);
      seconds += t.mean_epoch_seconds;
      const EvalStats s = cmd_evaluate(dir, episodes, derive_seed(seed, "sweep.eval"), log);
      samples.insert(samples.end(), s.episode_rewards.begin(), s.episode_rewards.end());
    }
    row.mean = mean(samples);
    row.stddev = sample_std(samples);
    row.runs = static_cast<int>(samples.size());
    row.epoch_seconds = seconds / static_cast<double>(seeds.size());
    rows.push_back(row);
  }
  auto f = open_out(out / "sweep.csv");
  f << "count,mean,std,n,epoch_seconds\n";
  for (const SweepRow& r : rows) {
    f << r.count << ',' << num(r.mean) << ',' << num(r.stddev) << ',' << r.runs << ','
      << num(r.epoch_seconds) << '\n';
  }
  return rows;
}

std::vector<std::string> ablation_variants() {
  return {"leed", "fixed-alpha:0.2", "fixed-alpha:0.5", "logit-ppo", "ippo"};
}

AblationResult cmd_ablation(const TrainConfig& base, const std::vector<std::uint64_t>& seeds,
                            const std::filesystem::path& out, std::ostream& log,
                            const std::vector<std::string>& variants) {
  if (seeds.empty()) throw PreconditionError("ablation: no seeds given");
  AblationResult result;
  result.variants = variants;
  result.seeds = seeds;
  std::size_t epochs = std::numeric_limits<std::size_t>::max();
  for (const std::string& variant : variants) {
    TrainConfig cfg = base;
    cfg.mode = parse_mode(variant, &cfg.fixed_alpha);
    std::string dir_name = variant;
    std::replace(dir_name.begin(), dir_name.end(), ':', '_');
    std::vector<std::vector<double>> per_seed;
    for (std::uint64_t seed : seeds) {
      cfg.seed = seed;
      log << "ablation " << variant << " seed " << seed << '\n';
      const TrainOutcome t = cmd_train(cfg, out / dir_name / seed_dir(seed), log);
      std::vector<double> rewards;
      for (const EpochMetrics& m : t.metrics) rewards.push_back(m.mean_reward_a);
      epochs = std::min(epochs, rewards.size());
      per_seed.push_back(std::move(rewards));
    }
    result.rewards.push_back(std::move(per_seed));
  }

  auto f = open_out(out / "ablation.csv");
  f << "epoch";
  for (const auto& v : variants) {
    for (std::uint64_t s : seeds) f << ',' << v << '@' << s;
  }
  for (const auto& v : variants) f << ',' << v << "_mean";
  f << '\n';
  for (std::size_t e = 0; e < epochs; ++e) {
    f << e + 1;
    for (const auto& per_seed : result.rewards) {
      for (const auto& r : per_seed) f << ',' << num(r[e]);
    }
    for (const auto& per_seed : result.rewards) {
      std::vector<double> at;
      for (const auto& r : per_seed) at.push_back(r[e]);
      f << ',' << num(mean(at));
    }
    f << '\n';
  }
  return result;
}

std::vector<DemoReportRow> cmd_demo_report(const TrainConfig& config,
                                           ExpertProvider& report_provider,
                                           const DemoReportOptions& options,
                                           const std::filesystem::path& out,
                                           std::ostream& log) {
  if (options.phases < 1 || options.prompts < 1 || options.epochs_per_phase < 0) {
    throw PreconditionError("demo-report: phases and prompts must be >= 1");
  }
  // Training (and with it prompt refinement) uses the run's own provider; the
  // report provider only answers the assessment prompts.
  Trainer trainer(config, make_scenario(config), make_provider(config));
  std::vector<DemoReportRow> rows;
  int k = 0;
  for (int phase = 1; phase <= options.phases; ++phase) {
    if (phase > 1) {
      for (int e = 0; e < options.epochs_per_phase; ++e) trainer.run_epoch(++k);
    }
    std::vector<double> tokens, rewards, dtws;
    std::size_t valid = 0, total = 0;
    for (int j = 0; j < options.prompts; ++j) {
      const Trainer::DemoQuality q =
          trainer.assess_demos(report_provider, derive_seed(config.seed, "report", j));
      tokens.push_back(static_cast<double>(q.tokens));
      rewards.insert(rewards.end(), q.reward.begin(), q.reward.end());
      dtws.insert(dtws.end(), q.dtw.begin(), q.dtw.end());
      for (auto v : q.valid) valid += v ? 1 : 0;
      total += q.valid.size();
    }
    DemoReportRow row;
    row.phase = phase;
    row.tokens = mean(tokens);
    row.validity_rate = total == 0 ? kNaN : 100.0 * static_cast<double>(valid) / total;
    row.mean_reward = mean(rewards);
    row.mean_dtw = mean(dtws);
    row.demonstrations = static_cast<int>(total);
    log << "phase " << phase << ": validity=" << num(row.validity_rate)
        << " dtw=" << num(row.mean_dtw) << " reward=" << num(row.mean_reward) << '\n';
    rows.push_back(row);
  }
  auto f = open_out(out / "demo_report.csv");
  f << "phase,tokens,validity_rate,mean_reward,mean_dtw,demonstrations\n";
  for (const DemoReportRow& r : rows) {
    f << r.phase << ',' << num(r.tokens) << ',' << num(r.validity_rate) << ','
      << num(r.mean_reward) << ',' << num(r.mean_dtw) << ',' << r.demonstrations << '\n';
  }
  return rows;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "nan") {
        row.push_back(kNaN);
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty()) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(t.header.size()) + " columns");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  auto f = open_out(path);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    f << (c ? "," : "") << table.header[c];
  }
  f << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << num(row[c]);
    f << '\n';
  }
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  if (window < 1) throw PreconditionError("moving average window must be >= 1");
  std::vector<double> out(v.size(), kNaN);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i + 1 >= static_cast<std::size_t>(window) ? i + 1 - window : 0;
    double s = 0.0;
    int n = 0;
    for (std::size_t j = lo; j <= i; ++j) {
      if (std::isnan(v[j])) continue;
      s += v[j];
      ++n;
    }
    if (n > 0) out[i] = s / n;
  }
  return out;
}

Table cmd_plot_data(const std::vector<std::filesystem::path>& inputs, int window,
                    const std::filesystem::path& out_file, std::ostream& log) {
  if (inputs.empty()) throw PreconditionError("plot-data: no input files");
  std::vector<Table> tables;
  for (const auto& p : inputs) tables.push_back(read_csv(p));
  const auto& header = tables.front().header;
  if (header.empty()) throw FormatError("plot-data: no columns");
  std::size_t rows = tables.front().rows.size();
  bool misaligned = false;
  for (std::size_t i = 1; i < tables.size(); ++i) {
    if (tables[i].header != header) {
      throw FormatError("plot-data: column mismatch between " + inputs.front().string() +
                        " and " + inputs[i].string());
    }
    if (tables[i].rows.size() != rows) misaligned = true;
    rows = std::min(rows, tables[i].rows.size());
  }
  for (const Table& t : tables) {
    for (std::size_t r = 0; r < rows; ++r) {
      if (t.rows[r][0] != tables.front().rows[r][0]) misaligned = true;
    }
  }
  if (misaligned) {
    log << "warning: inputs cover different epochs; using the first " << rows
        << " rows of each\n";
  }

  Table out;
  out.header.push_back(header[0]);
  for (std::size_t c = 1; c < header.size(); ++c) {
    out.header.push_back(header[c] + "_mean");
    out.header.push_back(header[c] + "_std");
  }
  std::vector<std::vector<std::vector<double>>> smoothed(header.size());
  for (std::size_t c = 1; c < header.size(); ++c) {
    for (const Table& t : tables) {
      std::vector<double> col;
      for (std::size_t r = 0; r < rows; ++r) col.push_back(t.rows[r][c]);
      smoothed[c].push_back(moving_average(col, window));
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row{tables.front().rows[r][0]};
    for (std::size_t c = 1; c < header.size(); ++c) {
      std::vector<double> at;
      for (const auto& s : smoothed[c]) {
        if (!std::isnan(s[r])) at.push_back(s[r]);
      }
      row.push_back(mean(at));
      row.push_back(at.empty() ? kNaN : sample_std(at));
    }
    out.rows.push_back(std::move(row));
  }
  if (!out_file.empty()) write_csv(out, out_file);
  return out;
}

void cmd_gen_graph(const std::string& kind, const std::filesystem::path& out_file) {
  RoadGraph g;
  if (kind.starts_with("grid:")) {
    g = make_grid(std::stoi(kind.substr(5)), kGridFixtureSpacing);
  } else if (kind == "hilly") {
    g = make_hilly();
  } else if (kind == "line") {
    g = make_line({1.0, 1.0});
  } else {
    throw PreconditionError("gen-graph: unknown fixture '" + kind + "'");
  }
  auto f = open_out(out_file);
  f << graph_to_json(g) << '\n';
}

}  // namespace xmix::harness
