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

#include "dppoison/attacks.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dppoison/core.h"
#include "dppoison/gradients.h"
#include "dppoison/noise.h"
#include "dppoison/rng.h"

namespace dppoison {
namespace {

// Trains a victim repeatedly on slowly changing data, warm-starting each
// logistic solve from the previous solution.
class WarmTrainer {
 public:
  WarmTrainer(const VictimSpec& victim, const SolverSettings& settings)
      : victim_(victim), settings_(settings) {}

  absl::StatusOr<ModelParams> Train(const Dataset& data,
                                    const NoiseSample& noise) {
    if (victim_.mechanism == Mechanism::kOutputPerturbation) {
      absl::StatusOr<ModelParams> base = TrainBase(data);
      if (!base.ok()) return base;
      base->theta += noise.b;
      return base;
    }
    absl::StatusOr<ModelParams> model = TrainMechanism(
        victim_, data, noise, settings_, perturbed_.has_value() ? &*perturbed_ : nullptr);
    if (model.ok()) perturbed_ = model->theta;
    return model;
  }

  absl::StatusOr<ModelParams> TrainBase(const Dataset& data) {
    absl::StatusOr<ModelParams> model = TrainBaseLearner(
        victim_, data, settings_, base_.has_value() ? &*base_ : nullptr);
    if (model.ok()) base_ = model->theta;
    return model;
  }

 private:
  const VictimSpec& victim_;
  const SolverSettings& settings_;
  std::optional<Vector> perturbed_;
  std::optional<Vector> base_;
};

// Adds weight * dC(M(D~, b))/dz_i to acc[r] for every i = items[r].
absl::Status AccumulateGradients(const VictimSpec& victim, const Dataset& data,
                                 const CostSpec& cost, const ModelParams& model,
                                 const NoiseSample& noise,
                                 const std::vector<int>& items, double weight,
                                 std::vector<ItemGradient>& acc) {
  const Vector cost_grad = CostGradientUnchecked(cost, model.theta);
  absl::StatusOr<ItemGradientSystem> system =
      ItemGradientSystem::Create(victim, data, model, noise, cost_grad);
  if (!system.ok()) return system.status();
  for (std::size_t r = 0; r < items.size(); ++r) {
    const ItemGradient g = system->ForItem(data, items[r]);
    acc[r].d_features += weight * g.d_features;
    if (g.d_label.has_value()) {
      acc[r].d_label = acc[r].d_label.value_or(0.0) + weight * *g.d_label;
    }
  }
  return absl::OkStatus();
}

std::vector<ItemGradient> ZeroGradients(std::size_t count, int dim) {
  return std::vector<ItemGradient>(count,
                                   ItemGradient{Vector::Zero(dim), std::nullopt});
}

// Indices of the k largest scores, ascending; ties favor the lower index.
std::vector<int> TopK(const std::vector<double>& scores, int k) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<int> AllIndices(int n) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

NoiseSample DrawNoise(const VictimSpec& victim, const Dataset& data,
                      std::uint64_t seed, StreamPurpose purpose,
                      std::uint64_t index) {
  RandomStream rng = DeriveStream(seed, purpose, index);
  return SampleNoise(data.dim, ResolveNoiseScale(victim, data.size()), rng);
}

// One (stochastic) gradient of the attack objective for `items` at D~.
absl::StatusOr<std::vector<ItemGradient>> StepGradients(
    const VictimSpec& victim, const Dataset& current, const CostSpec& cost,
    const AttackConfig& config, StreamPurpose purpose, int iteration,
    const std::vector<int>& items, WarmTrainer& trainer) {
  std::vector<ItemGradient> grads = ZeroGradients(items.size(), current.dim);
  const int draws = config.mode == AttackMode::kDpv ? config.batch : 1;
  for (int r = 0; r < draws; ++r) {
    NoiseSample noise = NoiseSample::Zero(current.dim);
    absl::StatusOr<ModelParams> model;
    if (config.mode == AttackMode::kDpv) {
      noise = DrawNoise(victim, current, config.seed, purpose,
                        static_cast<std::uint64_t>(iteration) * draws + r);
      model = trainer.Train(current, noise);
    } else {
      model = trainer.TrainBase(current);
    }
    if (!model.ok()) return model.status();
    if (absl::Status s = AccumulateGradients(victim, current, cost, *model,
                                             noise, items, 1.0 / draws, grads);
        !s.ok()) {
      return s;
    }
  }
  return grads;
}

}  // namespace

const char* SelectionName(Selection s) {
  switch (s) {
    case Selection::kShallow:
      return "shallow";
    case Selection::kDeep:
      return "deep";
    case Selection::kAll:
      return "all";
  }
  return "unknown";
}

const char* AttackModeName(AttackMode m) {
  return m == AttackMode::kDpv ? "dpv" : "sv";
}

absl::Status ValidateAttackConfig(const AttackConfig& config, int n) {
  if (config.k < 0 || config.k > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget k = ", config.k, " must lie in [0, ", n, "]"));
  }
  if (config.selection == Selection::kAll && config.k != n) {
    return absl::InvalidArgumentError("selection 'all' requires k = n");
  }
  if (!(config.eta > 0)) return absl::InvalidArgumentError("eta must be > 0");
  if (config.iterations < 0) {
    return absl::InvalidArgumentError("iterations must be >= 0");
  }
  if (config.m_select < 1) return absl::InvalidArgumentError("m_select must be >= 1");
  if (!(config.alpha > 0)) return absl::InvalidArgumentError("alpha must be > 0");
  if (config.relaxed_iterations.has_value() && *config.relaxed_iterations < 0) {
    return absl::InvalidArgumentError("relaxed_iterations must be >= 0");
  }
  if (config.batch < 1) return absl::InvalidArgumentError("batch must be >= 1");
  if (config.eval_samples < 2) {
    return absl::InvalidArgumentError("eval_samples must be >= 2");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<int>> SelectShallow(const VictimSpec& victim,
                                               const Dataset& data,
                                               const CostSpec& cost,
                                               const AttackConfig& config) {
  const int n = data.size();
  if (config.k < 0 || config.k > n) {
    return absl::InvalidArgumentError("budget k out of range");
  }
  if (config.k == 0) return std::vector<int>{};
  if (config.k == n) return AllIndices(n);
  if (absl::Status s = ValidateCost(cost, data.dim); !s.ok()) return s;

  const std::vector<int> all = AllIndices(n);
  std::vector<ItemGradient> grads = ZeroGradients(n, data.dim);
  WarmTrainer trainer(victim, config.solver);
  if (config.mode == AttackMode::kDpv) {
    for (int s = 0; s < config.m_select; ++s) {
      const NoiseSample noise =
          DrawNoise(victim, data, config.seed, StreamPurpose::kShallowSelect, s);
      absl::StatusOr<ModelParams> model = trainer.Train(data, noise);
      if (!model.ok()) return model.status();
      if (absl::Status st =
              AccumulateGradients(victim, data, cost, *model, noise, all,
                                  1.0 / config.m_select, grads);
          !st.ok()) {
        return st;
      }
    }
  } else {
    absl::StatusOr<ModelParams> model = trainer.TrainBase(data);
    if (!model.ok()) return model.status();
    if (absl::Status st =
            AccumulateGradients(victim, data, cost, *model,
                                NoiseSample::Zero(data.dim), all, 1.0, grads);
        !st.ok()) {
      return st;
    }
  }
  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) scores[i] = grads[i].Norm();
  return TopK(scores, config.k);
}

absl::StatusOr<Dataset> RelaxedAttack(const VictimSpec& victim,
                                      const Dataset& data,
                                      const CostSpec& cost,
                                      const AttackConfig& config,
                                      int iterations) {
  if (!(config.alpha > 0)) return absl::InvalidArgumentError("alpha must be > 0");
  if (absl::Status s = ValidateCost(cost, data.dim); !s.ok()) return s;
  const int n = data.size();
  const std::vector<int> all = AllIndices(n);
  const double shrink = 1.0 / (1.0 + config.eta * config.alpha);
  const bool ridge = victim.base == BaseLearner::kRidge;

  Dataset current = data;
  WarmTrainer trainer(victim, config.solver);
  for (int t = 1; t <= iterations; ++t) {
    absl::StatusOr<std::vector<ItemGradient>> grads =
        StepGradients(victim, current, cost, config, StreamPurpose::kRelaxedStep,
                      t, all, trainer);
    if (!grads.ok()) {
      return absl::Status(grads.status().code(),
                          absl::StrCat("relaxed attack iteration ", t, ": ",
                                       grads.status().message()));
    }
    for (int i = 0; i < n; ++i) {
      LabeledItem& item = current.items[i];
      const LabeledItem& clean = data.items[i];
      const ItemGradient& g = (*grads)[i];
      item.x = shrink * (item.x - config.eta * g.d_features +
                         (config.eta * config.alpha) * clean.x);
      if (ridge) {
        item.y = shrink * (item.y - config.eta * g.d_label.value_or(0.0) +
                           config.eta * config.alpha * clean.y);
      }
      item = ProjectItem(item);
    }
  }
  return current;
}

absl::StatusOr<std::vector<int>> SelectDeep(const VictimSpec& victim,
                                            const Dataset& data,
                                            const CostSpec& cost,
                                            const AttackConfig& config) {
  const int n = data.size();
  if (config.k < 0 || config.k > n) {
    return absl::InvalidArgumentError("budget k out of range");
  }
  if (config.k == 0) return std::vector<int>{};
  if (config.k == n) return AllIndices(n);
  absl::StatusOr<Dataset> relaxed =
      RelaxedAttack(victim, data, cost, config,
                    config.relaxed_iterations.value_or(config.iterations));
  if (!relaxed.ok()) return relaxed.status();
  return MostModified(*relaxed, data, victim.base, config.k);
}

absl::StatusOr<std::vector<int>> MostModified(const Dataset& relaxed,
                                              const Dataset& data,
                                              BaseLearner base, int k) {
  const int n = data.size();
  if (relaxed.size() != n) {
    return absl::InvalidArgumentError("relaxed and clean data differ in size");
  }
  if (k < 0 || k > n) return absl::InvalidArgumentError("budget k out of range");
  std::vector<double> scores(n);
  for (int i = 0; i < n; ++i) {
    absl::StatusOr<double> r =
        ModificationDistance(relaxed.items[i], data.items[i], base);
    if (!r.ok()) return r.status();
    scores[i] = *r;
  }
  return TopK(scores, k);
}

AttackTrace RunAttackOnItems(const VictimSpec& victim, const Dataset& data,
                             const CostSpec& cost, const AttackConfig& config,
                             std::vector<int> selected) {
  AttackTrace trace;
  trace.selected = std::move(selected);
  trace.poisoned = data;
  const bool ridge = victim.base == BaseLearner::kRidge;
  WarmTrainer trainer(victim, config.solver);
  WarmTrainer surrogate(victim, config.solver);

  auto snapshot = [&](int iteration) -> absl::Status {
    absl::StatusOr<ModelParams> base = surrogate.TrainBase(trace.poisoned);
    if (!base.ok()) return base.status();
    AttackSnapshot snap;
    snap.iteration = iteration;
    snap.items.reserve(trace.selected.size());
    for (int i : trace.selected) snap.items.push_back(trace.poisoned.items[i]);
    snap.surrogate_cost = EvalCostUnchecked(cost, base->theta);
    trace.snapshots.push_back(std::move(snap));
    return absl::OkStatus();
  };

  if (absl::Status s = snapshot(0); !s.ok()) {
    trace.status = s;
    return trace;
  }
  for (int t = 1; t <= config.iterations; ++t) {
    if (!trace.selected.empty()) {
      absl::StatusOr<std::vector<ItemGradient>> grads =
          StepGradients(victim, trace.poisoned, cost, config,
                        StreamPurpose::kAttackStep, t, trace.selected, trainer);
      if (!grads.ok()) {
        trace.status = absl::Status(
            grads.status().code(), absl::StrCat("attack iteration ", t, ": ",
                                                grads.status().message()));
        return trace;
      }
      for (std::size_t r = 0; r < trace.selected.size(); ++r) {
        LabeledItem& item = trace.poisoned.items[trace.selected[r]];
        const ItemGradient& g = (*grads)[r];
        item.x -= config.eta * g.d_features;
        if (ridge) item.y -= config.eta * g.d_label.value_or(0.0);
        item = ProjectItem(item);
      }
    }
    if (absl::Status s = snapshot(t); !s.ok()) {
      trace.status = absl::Status(
          s.code(), absl::StrCat("attack iteration ", t, ": ", s.message()));
      return trace;
    }
  }
  return trace;
}

absl::StatusOr<AttackTrace> RunAttack(const VictimSpec& victim,
                                      const Dataset& data, const CostSpec& cost,
                                      const AttackConfig& config) {
  if (absl::Status s = ValidateVictim(victim); !s.ok()) return s;
  if (absl::Status s = ValidateAttackConfig(config, data.size()); !s.ok()) {
    return s;
  }
  if (absl::Status s = ValidateCost(cost, data.dim); !s.ok()) return s;

  absl::StatusOr<std::vector<int>> selected;
  switch (config.selection) {
    case Selection::kAll:
      selected = AllIndices(data.size());
      break;
    case Selection::kShallow:
      selected = SelectShallow(victim, data, cost, config);
      break;
    case Selection::kDeep:
      selected = SelectDeep(victim, data, cost, config);
      break;
  }
  if (!selected.ok()) return selected.status();
  return RunAttackOnItems(victim, data, cost, config, *std::move(selected));
}

}  // namespace dppoison
