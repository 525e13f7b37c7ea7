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

#include "dppoison/estimate.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "absl/strings/str_cat.h"
#include "dppoison/core.h"
#include "dppoison/noise.h"
#include "dppoison/rng.h"

namespace dppoison {

absl::Status ParallelFor(int count, int threads,
                         const std::function<absl::Status(int)>& body) {
  if (count <= 0) return absl::OkStatus();
  std::vector<absl::Status> results(count);
  const int workers = std::clamp(threads, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      results[i] = body(i);
      if (!results[i].ok()) return results[i];
    }
    return absl::OkStatus();
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) results[i] = body(i);
    });
  }
  for (std::thread& t : pool) t.join();
  for (const absl::Status& s : results) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

CostEstimate Summarize(const std::vector<double>& values) {
  CostEstimate out;
  out.samples = static_cast<int>(values.size());
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.samples;
  if (out.samples < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / (out.samples - 1) / out.samples);
  return out;
}

absl::StatusOr<CostEstimate> EstimateAttackCost(
    const VictimSpec& victim, const Dataset& data, const CostSpec& cost,
    int samples, std::uint64_t seed, int threads,
    const SolverSettings& solver) {
  if (samples < 2) {
    return absl::InvalidArgumentError("cost estimate needs >= 2 samples");
  }
  if (absl::Status s = ValidateVictim(victim); !s.ok()) return s;
  if (absl::Status s = ValidateCost(cost, data.dim); !s.ok()) return s;

  absl::StatusOr<ModelParams> base = TrainBaseLearner(victim, data, solver);
  if (!base.ok()) return base.status();
  const double scale = ResolveNoiseScale(victim, data.size());
  const bool output = victim.mechanism == Mechanism::kOutputPerturbation;

  std::vector<double> values(samples);
  absl::Status status = ParallelFor(samples, threads, [&](int s) {
    RandomStream rng = DeriveStream(seed, StreamPurpose::kCostEstimate, s);
    const NoiseSample noise = SampleNoise(data.dim, scale, rng);
    if (output) {
      values[s] = EvalCostUnchecked(cost, base->theta + noise.b);
      return absl::OkStatus();
    }
    absl::StatusOr<ModelParams> model =
        TrainMechanism(victim, data, noise, solver, &base->theta);
    if (!model.ok()) {
      return absl::Status(model.status().code(),
                          absl::StrCat("sample ", s, ": ",
                                       model.status().message()));
    }
    values[s] = EvalCostUnchecked(cost, model->theta);
    return absl::OkStatus();
  });
  if (!status.ok()) return status;
  return Summarize(values);
}

}  // namespace dppoison
