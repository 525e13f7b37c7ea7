//
// Copyright 2026 The dppoison Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end: dataset generation, bound queries, attacks, sweeps
// and cost evaluation.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "dppoison/bounds.h"
#include "dppoison/datasets.h"
#include "dppoison/estimate.h"
#include "dppoison/experiment.h"
#include "dppoison/rng.h"
#include "json.hpp"

namespace {

using dppoison::ExperimentConfig;
using Json = nlohmann::ordered_json;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::optional<int> threads;
};

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

absl::StatusOr<ExperimentConfig> ResolveConfig(const GlobalFlags& flags,
                                               bool required) {
  ExperimentConfig config;
  if (!flags.config.empty()) {
    absl::StatusOr<ExperimentConfig> loaded =
        dppoison::LoadExperimentConfig(flags.config);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  } else if (required) {
    return absl::InvalidArgumentError("--config is required");
  } else {
    config.attack.k = -1;
  }
  if (flags.seed.has_value()) {
    config.seed = *flags.seed;
    config.attack.seed = *flags.seed;
  }
  if (flags.threads.has_value()) config.threads = *flags.threads;
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (absl::Status s = dppoison::ValidateExperimentConfig(config); !s.ok()) {
    return s;
  }
  return config;
}

Json EstimateJson(const dppoison::CostEstimate& e) {
  Json j;
  j["mean"] = e.mean;
  j["stderr"] = e.std_error;
  j["samples"] = e.samples;
  return j;
}

int ReportExperiment(const dppoison::ExperimentResult& result,
                     const ExperimentConfig& config) {
  for (const dppoison::SweepPoint& p : result.points) {
    std::cout << "k=" << p.k << " epsilon=" << dppoison::FormatDouble(p.epsilon)
              << " J(D)=" << dppoison::FormatDouble(p.clean.mean)
              << " J(D~)=" << dppoison::FormatDouble(p.poisoned.mean)
              << " stderr=" << dppoison::FormatDouble(p.poisoned.std_error)
              << " lower_bound=" << dppoison::FormatDouble(p.lower_bound)
              << (p.sound ? " sound" : " UNSOUND") << "\n";
  }
  if (!config.out_dir.empty()) {
    std::cout << "outputs written to " << config.out_dir << "\n";
  }
  std::cout << "runtime " << result.runtime_seconds << " s\n";
  if (!result.status.ok()) return Fail(result.status);
  return 0;
}

int RunGenData(const GlobalFlags& flags, const std::string& kind, int n,
               const std::vector<double>& theta_star, int grid_m,
               const std::string& file) {
  const std::uint64_t seed = flags.seed.value_or(0);
  absl::StatusOr<dppoison::Dataset> data;
  if (!flags.config.empty()) {
    absl::StatusOr<ExperimentConfig> config = ResolveConfig(flags, true);
    if (!config.ok()) return Fail(config.status());
    absl::StatusOr<dppoison::ExperimentInputs> inputs =
        dppoison::BuildInputs(*config);
    if (!inputs.ok()) return Fail(inputs.status());
    const std::filesystem::path dir(flags.out.empty() ? "." : flags.out);
    std::filesystem::create_directories(dir);
    if (absl::Status s = dppoison::WriteDatasetCsv(inputs->data,
                                                   (dir / "data.csv").string());
        !s.ok()) {
      return Fail(s);
    }
    std::cout << "wrote " << (dir / "data.csv").string() << "\n";
    if (!inputs->eval_set.empty()) {
      if (absl::Status s = dppoison::WriteDatasetCsv(
              inputs->eval_set, (dir / "eval.csv").string());
          !s.ok()) {
        return Fail(s);
      }
      std::cout << "wrote " << (dir / "eval.csv").string() << "\n";
    }
    return 0;
  }
  if (kind == "1d") {
    dppoison::RandomStream rng =
        dppoison::DeriveStream(seed, dppoison::StreamPurpose::kData);
    data = dppoison::Gen1dDataset(n, rng);
  } else if (kind == "2d") {
    if (theta_star.size() != 2) {
      return Fail(absl::InvalidArgumentError("--theta-star needs 2 values"));
    }
    dppoison::RandomStream rng =
        dppoison::DeriveStream(seed, dppoison::StreamPurpose::kData);
    data = dppoison::Gen2dDataset(n, dppoison::Vector{{theta_star[0], theta_star[1]}},
                                  rng);
  } else if (kind == "grid1d") {
    data = dppoison::EvalGrid1d(grid_m);
  } else if (kind == "grid2d") {
    data = dppoison::EvalGrid2d(grid_m);
  } else {
    return Fail(absl::InvalidArgumentError("unknown --kind"));
  }
  if (!data.ok()) return Fail(data.status());
  std::string path = file;
  if (path.empty()) {
    const std::filesystem::path dir(flags.out.empty() ? "." : flags.out);
    std::filesystem::create_directories(dir);
    path = (dir / (kind + ".csv")).string();
  }
  if (absl::Status s = dppoison::WriteDatasetCsv(*data, path); !s.ok()) {
    return Fail(s);
  }
  std::cout << "wrote " << path << " (" << data->size() << " items)\n";
  return 0;
}

int RunBound(double j_clean, double epsilon, double delta, int k, double tau,
             std::optional<double> cbar, const std::string& sign) {
  dppoison::BoundQuery q;
  q.j_clean = j_clean;
  q.epsilon = epsilon;
  q.delta = delta;
  q.k = k;
  q.tau = tau;
  q.cbar = cbar;
  if (sign == "nonnegative") {
    q.sign = dppoison::CostSign::kNonNegative;
  } else if (sign == "nonpositive") {
    q.sign = dppoison::CostSign::kNonPositive;
  } else {
    return Fail(absl::InvalidArgumentError(
        "--sign must be nonnegative or nonpositive"));
  }
  Json out;
  out["j_clean"] = j_clean;
  out["epsilon"] = epsilon;
  out["delta"] = delta;
  out["k"] = k;
  out["tau"] = tau;
  absl::StatusOr<double> bound = dppoison::LowerBound(q);
  if (!bound.ok()) return Fail(bound.status());
  out["lower_bound"] = *bound;
  if (delta == 0.0) {
    absl::StatusOr<double> pure = dppoison::LowerBoundPure(q);
    if (!pure.ok()) return Fail(pure.status());
    out["lower_bound_pure"] = *pure;
  }
  absl::StatusOr<int> min_items =
      delta == 0.0 ? dppoison::MinItemsPure(epsilon, tau)
                   : dppoison::MinItemsApprox(q);
  if (min_items.ok()) {
    out["min_items"] = *min_items;
  } else {
    out["min_items"] = nullptr;
    out["min_items_error"] = std::string(min_items.status().message());
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunEvaluate(const GlobalFlags& flags, const std::string& data_path,
                std::optional<int> samples, std::optional<int> k) {
  absl::StatusOr<ExperimentConfig> config = ResolveConfig(flags, true);
  if (!config.ok()) return Fail(config.status());
  if (samples.has_value()) config->attack.eval_samples = *samples;
  absl::StatusOr<dppoison::ExperimentInputs> inputs =
      dppoison::BuildInputs(*config);
  if (!inputs.ok()) return Fail(inputs.status());

  absl::StatusOr<dppoison::CostEstimate> clean =
      dppoison::EvaluateDataset(*config, *inputs, inputs->data);
  if (!clean.ok()) return Fail(clean.status());
  Json out;
  out["clean"] = EstimateJson(*clean);
  if (!data_path.empty()) {
    absl::StatusOr<dppoison::Dataset> data =
        dppoison::LoadCsvDataset(data_path, dppoison::NativeCsvSchema());
    if (!data.ok()) return Fail(data.status());
    absl::StatusOr<dppoison::CostEstimate> poisoned =
        dppoison::EvaluateDataset(*config, *inputs, *data);
    if (!poisoned.ok()) return Fail(poisoned.status());
    out["poisoned"] = EstimateJson(*poisoned);
  }
  if (k.has_value()) {
    absl::StatusOr<double> bound = dppoison::BoundForEstimate(
        config->victim, inputs->cost, *clean, *k);
    if (!bound.ok()) return Fail(bound.status());
    out["k"] = *k;
    out["lower_bound"] = *bound;
  }
  const std::string text = out.dump(2);
  std::cout << text << "\n";
  if (!config->out_dir.empty()) {
    std::filesystem::create_directories(config->out_dir);
    std::ofstream file(std::filesystem::path(config->out_dir) / "evaluate.json");
    file << text << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-poisoning attacks on differentially-private learners"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "Random seed");
  app.add_option("--config", flags.config, "Experiment config (JSON)");
  app.add_option("--out", flags.out, "Output directory");
  app.add_option("--threads", flags.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* gen = app.add_subcommand("gen-data", "Write a synthetic dataset");
  std::string kind = "2d";
  int n = 317;
  std::vector<double> theta_star = {1.0, 1.0};
  int grid_m = 317;
  std::string file;
  gen->add_option("--kind", kind, "1d, 2d, grid1d or grid2d")
      ->check(CLI::IsMember({"1d", "2d", "grid1d", "grid2d"}));
  gen->add_option("--n", n, "Number of items")->check(CLI::PositiveNumber);
  gen->add_option("--theta-star", theta_star, "Labeling direction (2d)")
      ->delimiter(',');
  gen->add_option("--m", grid_m, "Grid size (grid1d/grid2d)");
  gen->add_option("--file", file, "Output CSV (default <out>/<kind>.csv)");

  CLI::App* bound = app.add_subcommand("bound", "Evaluate the defense bounds");
  double j_clean = 1.0, epsilon = 0.1, delta = 0.0, tau = 1.0;
  int k = 0;
  std::optional<double> cbar;
  std::string sign = "nonnegative";
  bound->add_option("--j", j_clean, "Clean attack cost J(D)");
  bound->add_option("--epsilon", epsilon, "Privacy parameter epsilon");
  bound->add_option("--delta", delta, "Privacy parameter delta");
  bound->add_option("--k", k, "Number of poisoned items");
  bound->add_option("--tau", tau, "Target reduction factor");
  bound->add_option("--cbar", cbar, "Bound on |C|");
  bound->add_option("--sign", sign, "nonnegative or nonpositive");

  CLI::App* attack = app.add_subcommand("attack", "Run one experiment config");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a k or epsilon sweep");
  std::string sweep_over;
  std::vector<double> sweep_values;
  sweep->add_option("--over", sweep_over, "k or epsilon")
      ->check(CLI::IsMember({"k", "epsilon"}));
  sweep->add_option("--values", sweep_values, "Sweep values")->delimiter(',');

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Estimate the attack cost J");
  std::string data_path;
  std::optional<int> samples;
  std::optional<int> eval_k;
  evaluate->add_option("--data", data_path,
                       "Dataset CSV to evaluate (x0..x{d-1},y)");
  evaluate->add_option("--samples", samples, "Monte-Carlo samples");
  evaluate->add_option("--k", eval_k, "Also report the lower bound for k");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    return RunGenData(flags, kind, n, theta_star, grid_m, file);
  }
  if (bound->parsed()) {
    return RunBound(j_clean, epsilon, delta, k, tau, cbar, sign);
  }
  if (evaluate->parsed()) {
    return RunEvaluate(flags, data_path, samples, eval_k);
  }

  absl::StatusOr<ExperimentConfig> config = ResolveConfig(flags, true);
  if (!config.ok()) return Fail(config.status());
  if (attack->parsed()) {
    config->sweep = {};
  } else if (sweep->parsed()) {
    if (!sweep_over.empty()) {
      config->sweep.kind = sweep_over == "k" ? dppoison::SweepKind::kBudget
                                             : dppoison::SweepKind::kEpsilon;
      config->sweep.values = sweep_values;
    }
    if (config->sweep.kind == dppoison::SweepKind::kNone) {
      return Fail(absl::InvalidArgumentError(
          "no sweep in the config; pass --over and --values"));
    }
    if (absl::Status s = dppoison::ValidateExperimentConfig(*config); !s.ok()) {
      return Fail(s);
    }
  }
  const dppoison::ExperimentResult result = dppoison::RunExperiment(*config);
  return ReportExperiment(result, *config);
}
