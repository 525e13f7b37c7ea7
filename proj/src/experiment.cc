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

#include "dppoison/experiment.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dppoison/bounds.h"
#include "dppoison/core.h"
#include "dppoison/kernels.h"
#include "dppoison/rng.h"

namespace dppoison {
namespace {

using Json = nlohmann::ordered_json;

template <typename Enum>
absl::StatusOr<Enum> ParseEnum(const Json& j, const char* key, Enum fallback,
                               const std::map<std::string, Enum>& names) {
  if (!j.contains(key)) return fallback;
  const std::string text = j.at(key).get<std::string>();
  auto it = names.find(text);
  if (it == names.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown value '", text, "' for '", key, "'"));
  }
  return it->second;
}

template <typename Enum>
std::string EnumText(Enum value, const std::map<std::string, Enum>& names) {
  for (const auto& [text, v] : names) {
    if (v == value) return text;
  }
  return "unknown";
}

const std::map<std::string, Mechanism>& MechanismNames() {
  static const auto* names = new std::map<std::string, Mechanism>{
      {"objective", Mechanism::kObjectivePerturbation},
      {"output", Mechanism::kOutputPerturbation}};
  return *names;
}

const std::map<std::string, BaseLearner>& BaseNames() {
  static const auto* names = new std::map<std::string, BaseLearner>{
      {"logistic", BaseLearner::kLogistic}, {"ridge", BaseLearner::kRidge}};
  return *names;
}

const std::map<std::string, AttackGoal>& GoalNames() {
  static const auto* names = new std::map<std::string, AttackGoal>{
      {"parameter_targeting", AttackGoal::kParameterTargeting},
      {"label_targeting", AttackGoal::kLabelTargeting},
      {"label_aversion", AttackGoal::kLabelAversion}};
  return *names;
}

const std::map<std::string, EvalLoss>& LossNames() {
  static const auto* names = new std::map<std::string, EvalLoss>{
      {"logistic", EvalLoss::kLogistic}, {"squared", EvalLoss::kSquared}};
  return *names;
}

const std::map<std::string, Selection>& SelectionNames() {
  static const auto* names = new std::map<std::string, Selection>{
      {"shallow", Selection::kShallow},
      {"deep", Selection::kDeep},
      {"all", Selection::kAll}};
  return *names;
}

const std::map<std::string, AttackMode>& ModeNames() {
  static const auto* names = new std::map<std::string, AttackMode>{
      {"dpv", AttackMode::kDpv}, {"sv", AttackMode::kSv}};
  return *names;
}

const std::map<std::string, DataSourceKind>& DataSourceNames() {
  static const auto* names = new std::map<std::string, DataSourceKind>{
      {"gen1d", DataSourceKind::kGen1d},
      {"gen2d", DataSourceKind::kGen2d},
      {"csv", DataSourceKind::kCsv}};
  return *names;
}

const std::map<std::string, EvalSourceKind>& EvalSourceNames() {
  static const auto* names = new std::map<std::string, EvalSourceKind>{
      {"none", EvalSourceKind::kNone},
      {"grid1d", EvalSourceKind::kGrid1d},
      {"grid2d", EvalSourceKind::kGrid2d},
      {"neighbors", EvalSourceKind::kNeighbors},
      {"min_label", EvalSourceKind::kMinLabel},
      {"csv", EvalSourceKind::kCsv}};
  return *names;
}

const std::map<std::string, SweepKind>& SweepNames() {
  static const auto* names = new std::map<std::string, SweepKind>{
      {"none", SweepKind::kNone},
      {"k", SweepKind::kBudget},
      {"epsilon", SweepKind::kEpsilon}};
  return *names;
}

Vector ToVector(const Json& j) {
  const std::vector<double> values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

Json FromVector(const Vector& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string ResolvePath(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

void ParseSchema(const Json& j, CsvSchema& schema) {
  if (j.contains("delimiter")) {
    const std::string d = j.at("delimiter").get<std::string>();
    schema.delimiter = (d == "whitespace" || d.empty()) ? ' ' : d[0];
  }
  schema.has_header = j.value("header", schema.has_header);
  if (j.contains("features")) {
    schema.feature_columns.clear();
    for (const Json& f : j.at("features")) {
      schema.feature_columns.push_back(
          f.is_string() ? f.get<std::string>() : std::to_string(f.get<int>()));
    }
  }
  if (j.contains("label_column")) {
    const Json& l = j.at("label_column");
    schema.label_column =
        l.is_string() ? l.get<std::string>() : std::to_string(l.get<int>());
  }
  if (j.contains("label_map")) {
    schema.label_map.clear();
    for (const auto& [key, value] : j.at("label_map").items()) {
      schema.label_map[key] = value.get<double>();
    }
  }
}

void EmitSchema(const CsvSchema& schema, Json& j) {
  j["delimiter"] =
      schema.delimiter == ' ' ? std::string("whitespace")
                              : std::string(1, schema.delimiter);
  j["header"] = schema.has_header;
  j["features"] = schema.feature_columns;
  j["label_column"] = schema.label_column;
  Json map = Json::object();
  for (const auto& [key, value] : schema.label_map) map[key] = value;
  j["label_map"] = map;
}

absl::StatusOr<ExperimentConfig> ParseUnchecked(const Json& j,
                                                const std::string& base_dir) {
  ExperimentConfig c;
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);

  const Json victim = j.value("victim", Json::object());
  {
    absl::StatusOr<Mechanism> m = ParseEnum(victim, "mechanism",
                                            c.victim.mechanism, MechanismNames());
    if (!m.ok()) return m.status();
    c.victim.mechanism = *m;
    absl::StatusOr<BaseLearner> b =
        ParseEnum(victim, "base", c.victim.base, BaseNames());
    if (!b.ok()) return b.status();
    c.victim.base = *b;
    c.victim.lambda = victim.value("lambda", c.victim.lambda);
    if (victim.contains("rho") && !victim.at("rho").is_null()) {
      c.victim.rho = victim.at("rho").get<double>();
    }
    c.victim.epsilon = victim.value("epsilon", c.victim.epsilon);
    c.victim.delta = victim.value("delta", c.victim.delta);
    if (victim.contains("noise_scale") && !victim.at("noise_scale").is_null()) {
      c.victim.noise_scale = victim.at("noise_scale").get<double>();
    }
  }

  const Json data = j.value("data", Json::object());
  {
    absl::StatusOr<DataSourceKind> kind =
        ParseEnum(data, "source", c.data.kind, DataSourceNames());
    if (!kind.ok()) return kind.status();
    c.data.kind = *kind;
    c.data.n = data.value("n", c.data.n);
    if (data.contains("theta_star")) {
      c.data.theta_star = ToVector(data.at("theta_star"));
    }
    c.data.path = ResolvePath(data.value("path", std::string()), base_dir);
    ParseSchema(data, c.data.schema);
    c.data.normalize = data.value("normalize", c.data.normalize);
    c.data.normalize_labels =
        data.value("normalize_labels", c.data.normalize_labels);
    if (data.contains("label_range")) {
      const std::vector<double> range =
          data.at("label_range").get<std::vector<double>>();
      if (range.size() != 2) {
        return absl::InvalidArgumentError("label_range needs two values");
      }
      c.data.label_lo = range[0];
      c.data.label_hi = range[1];
    }
  }

  const Json eval = j.value("eval", Json::object());
  {
    absl::StatusOr<EvalSourceKind> kind =
        ParseEnum(eval, "source", c.eval.kind, EvalSourceNames());
    if (!kind.ok()) return kind.status();
    c.eval.kind = *kind;
    c.eval.m = eval.value("m", c.eval.m);
    c.eval.label = eval.value("label", c.eval.label);
    c.eval.count = eval.value("count", c.eval.count);
    c.eval.include_seed = eval.value("include_seed", c.eval.include_seed);
    c.eval.target_label = eval.value("target_label", c.eval.target_label);
    c.eval.path = ResolvePath(eval.value("path", std::string()), base_dir);
    ParseSchema(eval, c.eval.schema);
    c.eval.normalize = eval.value("normalize", c.eval.normalize);
  }

  const Json cost = j.value("cost", Json::object());
  {
    absl::StatusOr<AttackGoal> goal =
        ParseEnum(cost, "goal", c.cost.goal, GoalNames());
    if (!goal.ok()) return goal.status();
    c.cost.goal = *goal;
    const EvalLoss default_loss = c.victim.base == BaseLearner::kRidge
                                      ? EvalLoss::kSquared
                                      : EvalLoss::kLogistic;
    absl::StatusOr<EvalLoss> loss =
        ParseEnum(cost, "loss", default_loss, LossNames());
    if (!loss.ok()) return loss.status();
    c.cost.loss = *loss;
    if (cost.contains("target") && cost.at("target").is_array()) {
      c.cost.target = ToVector(cost.at("target"));
    }
    if (cost.contains("cbar") && !cost.at("cbar").is_null()) {
      c.cost.cbar = cost.at("cbar").get<double>();
    }
  }

  const Json attack = j.value("attack", Json::object());
  {
    AttackConfig& a = c.attack;
    a.k = -1;
    if (attack.contains("k") && attack.at("k").is_number_integer()) {
      a.k = attack.at("k").get<int>();
    }
    absl::StatusOr<Selection> sel =
        ParseEnum(attack, "selection", a.selection, SelectionNames());
    if (!sel.ok()) return sel.status();
    a.selection = *sel;
    absl::StatusOr<AttackMode> mode =
        ParseEnum(attack, "mode", a.mode, ModeNames());
    if (!mode.ok()) return mode.status();
    a.mode = *mode;
    a.eta = attack.value("eta", a.eta);
    a.iterations = attack.value("iterations", a.iterations);
    a.m_select = attack.value("m_select", a.m_select);
    a.alpha = attack.value("alpha", a.alpha);
    if (attack.contains("relaxed_iterations") &&
        !attack.at("relaxed_iterations").is_null()) {
      a.relaxed_iterations = attack.at("relaxed_iterations").get<int>();
    }
    a.batch = attack.value("batch", a.batch);
    a.eval_samples = attack.value("eval_samples", a.eval_samples);
    const Json solver = attack.value("solver", Json::object());
    a.solver.grad_tol = solver.value("grad_tol", a.solver.grad_tol);
    a.solver.max_iters = solver.value("max_iters", a.solver.max_iters);
    a.solver.dual_tol = solver.value("dual_tol", a.solver.dual_tol);
  }

  const Json sweep = j.value("sweep", Json::object());
  {
    absl::StatusOr<SweepKind> kind =
        ParseEnum(sweep, "over", c.sweep.kind, SweepNames());
    if (!kind.ok()) return kind.status();
    c.sweep.kind = *kind;
    if (sweep.contains("values")) {
      c.sweep.values = sweep.at("values").get<std::vector<double>>();
    }
  }

  const Json output = j.value("output", Json::object());
  c.out_dir = output.value("dir", c.out_dir);
  c.trace_stride = output.value("trace_stride", c.trace_stride);
  c.eval_every = output.value("eval_every", c.eval_every);
  c.attack.seed = c.seed;
  return c;
}

Json EstimateJson(const CostEstimate& e) {
  Json j;
  j["mean"] = e.mean;
  j["stderr"] = e.std_error;
  j["samples"] = e.samples;
  return j;
}

Dataset Materialize(const Dataset& clean, const AttackTrace& trace,
                    const AttackSnapshot& snap) {
  Dataset out = clean;
  for (std::size_t r = 0; r < trace.selected.size(); ++r) {
    out.items[trace.selected[r]] = snap.items[r];
  }
  return out;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << text;
  out.close();
  if (!out) return absl::DataLossError(absl::StrCat("failed writing ", path));
  return absl::OkStatus();
}

std::string SweepColumn(SweepKind kind) {
  return kind == SweepKind::kBudget ? "k" : "epsilon";
}

void AppendTrace(const ExperimentConfig& config, const AttackTrace& trace,
                 const std::string& prefix, std::string& out) {
  const int last = static_cast<int>(trace.snapshots.size()) - 1;
  const int stride = std::max(1, config.trace_stride);
  for (int s = 0; s <= last; ++s) {
    if (s % stride != 0 && s != last) continue;
    const AttackSnapshot& snap = trace.snapshots[s];
    for (std::size_t r = 0; r < trace.selected.size(); ++r) {
      absl::StrAppend(&out, prefix, snap.iteration, ",", trace.selected[r]);
      const LabeledItem& item = snap.items[r];
      for (Eigen::Index c = 0; c < item.x.size(); ++c) {
        absl::StrAppend(&out, ",", FormatDouble(item.x[c]));
      }
      absl::StrAppend(&out, ",", FormatDouble(item.y), "\n");
    }
  }
}

}  // namespace

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const nlohmann::ordered_json& j, const std::string& base_dir) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  absl::StatusOr<ExperimentConfig> config;
  try {
    config = ParseUnchecked(j, base_dir);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("config: ", e.what()));
  }
  if (!config.ok()) return config;
  if (absl::Status s = ValidateExperimentConfig(*config); !s.ok()) return s;
  return config;
}

absl::StatusOr<ExperimentConfig> LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", e.what()));
  }
  return ParseExperimentConfig(
      j, std::filesystem::path(path).parent_path().string());
}

nlohmann::ordered_json ExperimentConfigToJson(const ExperimentConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["threads"] = c.threads;

  Json victim;
  victim["mechanism"] = EnumText(c.victim.mechanism, MechanismNames());
  victim["base"] = EnumText(c.victim.base, BaseNames());
  victim["lambda"] = c.victim.lambda;
  victim["rho"] = c.victim.rho.has_value() ? Json(*c.victim.rho) : Json();
  victim["epsilon"] = c.victim.epsilon;
  victim["delta"] = c.victim.delta;
  victim["noise_scale"] =
      c.victim.noise_scale.has_value() ? Json(*c.victim.noise_scale) : Json();
  j["victim"] = victim;

  Json data;
  data["source"] = EnumText(c.data.kind, DataSourceNames());
  if (c.data.kind == DataSourceKind::kCsv) {
    data["path"] = c.data.path;
    EmitSchema(c.data.schema, data);
    data["normalize"] = c.data.normalize;
    data["normalize_labels"] = c.data.normalize_labels;
    data["label_range"] = {c.data.label_lo, c.data.label_hi};
  } else {
    data["n"] = c.data.n;
    if (c.data.kind == DataSourceKind::kGen2d) {
      data["theta_star"] = FromVector(c.data.theta_star);
    }
  }
  j["data"] = data;

  Json eval;
  eval["source"] = EnumText(c.eval.kind, EvalSourceNames());
  switch (c.eval.kind) {
    case EvalSourceKind::kGrid1d:
    case EvalSourceKind::kGrid2d:
      eval["m"] = c.eval.m;
      break;
    case EvalSourceKind::kNeighbors:
      eval["label"] = c.eval.label;
      eval["count"] = c.eval.count;
      eval["include_seed"] = c.eval.include_seed;
      break;
    case EvalSourceKind::kMinLabel:
      eval["target_label"] = c.eval.target_label;
      break;
    case EvalSourceKind::kCsv:
      eval["path"] = c.eval.path;
      EmitSchema(c.eval.schema, eval);
      eval["normalize"] = c.eval.normalize;
      break;
    case EvalSourceKind::kNone:
      break;
  }
  j["eval"] = eval;

  Json cost;
  cost["goal"] = EnumText(c.cost.goal, GoalNames());
  cost["loss"] = EnumText(c.cost.loss, LossNames());
  cost["target"] = c.cost.target.size() > 0 ? FromVector(c.cost.target)
                                             : Json("train_on_eval");
  cost["cbar"] = c.cost.cbar.has_value() ? Json(*c.cost.cbar) : Json();
  j["cost"] = cost;

  Json attack;
  attack["k"] = c.attack.k < 0 ? Json("n") : Json(c.attack.k);
  attack["selection"] = EnumText(c.attack.selection, SelectionNames());
  attack["mode"] = EnumText(c.attack.mode, ModeNames());
  attack["eta"] = c.attack.eta;
  attack["iterations"] = c.attack.iterations;
  attack["m_select"] = c.attack.m_select;
  attack["alpha"] = c.attack.alpha;
  attack["relaxed_iterations"] = c.attack.relaxed_iterations.has_value()
                                     ? Json(*c.attack.relaxed_iterations)
                                     : Json();
  attack["batch"] = c.attack.batch;
  attack["eval_samples"] = c.attack.eval_samples;
  Json solver;
  solver["grad_tol"] = c.attack.solver.grad_tol;
  solver["max_iters"] = c.attack.solver.max_iters;
  solver["dual_tol"] = c.attack.solver.dual_tol;
  attack["solver"] = solver;
  j["attack"] = attack;

  Json sweep;
  sweep["over"] = EnumText(c.sweep.kind, SweepNames());
  sweep["values"] = c.sweep.values;
  j["sweep"] = sweep;

  Json output;
  output["dir"] = c.out_dir;
  output["trace_stride"] = c.trace_stride;
  output["eval_every"] = c.eval_every;
  j["output"] = output;
  return j;
}

absl::Status ValidateExperimentConfig(const ExperimentConfig& c) {
  if (absl::Status s = ValidateVictim(c.victim); !s.ok()) return s;
  if (c.threads < 1) return absl::InvalidArgumentError("threads must be >= 1");
  if (c.trace_stride < 1) {
    return absl::InvalidArgumentError("trace_stride must be >= 1");
  }
  if (c.eval_every < 0) {
    return absl::InvalidArgumentError("eval_every must be >= 0");
  }
  switch (c.data.kind) {
    case DataSourceKind::kGen1d:
    case DataSourceKind::kGen2d:
      if (c.data.n < 1) return absl::InvalidArgumentError("data.n must be >= 1");
      if (c.data.kind == DataSourceKind::kGen2d && c.data.theta_star.size() != 2) {
        return absl::InvalidArgumentError("data.theta_star must have 2 entries");
      }
      break;
    case DataSourceKind::kCsv:
      if (!std::filesystem::exists(c.data.path)) {
        return absl::NotFoundError(
            absl::StrCat("data file '", c.data.path, "' does not exist"));
      }
      break;
  }
  if (c.eval.kind == EvalSourceKind::kCsv &&
      !std::filesystem::exists(c.eval.path)) {
    return absl::NotFoundError(
        absl::StrCat("eval file '", c.eval.path, "' does not exist"));
  }
  const bool needs_eval = c.cost.goal != AttackGoal::kParameterTargeting ||
                          c.cost.target.size() == 0;
  if (needs_eval && c.eval.kind == EvalSourceKind::kNone) {
    return absl::InvalidArgumentError(
        "cost needs an evaluation set but eval.source is 'none'");
  }
  if (c.sweep.kind == SweepKind::kNone) {
    if (!c.sweep.values.empty()) {
      return absl::InvalidArgumentError("sweep values given without sweep.over");
    }
  } else {
    if (c.sweep.values.empty()) {
      return absl::InvalidArgumentError("sweep needs at least one value");
    }
    for (std::size_t i = 1; i < c.sweep.values.size(); ++i) {
      if (!(c.sweep.values[i] > c.sweep.values[i - 1])) {
        return absl::InvalidArgumentError(
            "sweep values must be strictly increasing");
      }
    }
    for (double v : c.sweep.values) {
      if (c.sweep.kind == SweepKind::kBudget &&
          (v < 0 || v != std::floor(v))) {
        return absl::InvalidArgumentError(
            "k sweep values must be non-negative integers");
      }
      if (c.sweep.kind == SweepKind::kEpsilon && !(v > 0)) {
        return absl::InvalidArgumentError("epsilon sweep values must be > 0");
      }
    }
  }
  AttackConfig probe = c.attack;
  probe.k = 0;
  probe.selection = Selection::kDeep;
  return ValidateAttackConfig(probe, 0);
}

absl::StatusOr<ExperimentInputs> BuildInputs(const ExperimentConfig& config) {
  ExperimentInputs in;
  switch (config.data.kind) {
    case DataSourceKind::kGen1d: {
      RandomStream rng = DeriveStream(config.seed, StreamPurpose::kData);
      in.data = Gen1dDataset(config.data.n, rng);
      break;
    }
    case DataSourceKind::kGen2d: {
      RandomStream rng = DeriveStream(config.seed, StreamPurpose::kData);
      in.data = Gen2dDataset(config.data.n, config.data.theta_star, rng);
      break;
    }
    case DataSourceKind::kCsv: {
      absl::StatusOr<Dataset> loaded =
          LoadCsvDataset(config.data.path, config.data.schema);
      if (!loaded.ok()) return loaded.status();
      in.data = *std::move(loaded);
      if (config.data.normalize) {
        absl::StatusOr<Dataset> normalized =
            NormalizeDataset(in.data, config.data.normalize_labels,
                             config.data.label_lo, config.data.label_hi);
        if (!normalized.ok()) return normalized.status();
        in.data = *std::move(normalized);
      }
      break;
    }
  }

  absl::StatusOr<Dataset> eval = Dataset{in.data.dim, {}};
  switch (config.eval.kind) {
    case EvalSourceKind::kNone:
      break;
    case EvalSourceKind::kGrid1d:
      eval = EvalGrid1d(config.eval.m);
      break;
    case EvalSourceKind::kGrid2d:
      eval = EvalGrid2d(config.eval.m);
      break;
    case EvalSourceKind::kNeighbors: {
      RandomStream rng = DeriveStream(config.seed, StreamPurpose::kEvalSet);
      absl::StatusOr<NeighborEvalSet> nn =
          BuildNeighborEvalSet(in.data, config.eval.label, config.eval.count,
                               config.eval.include_seed, rng);
      if (!nn.ok()) return nn.status();
      in.eval_seed_index = nn->seed_index;
      eval = std::move(nn->eval_set);
      break;
    }
    case EvalSourceKind::kMinLabel:
      eval = MinLabelEvalSet(in.data, config.eval.target_label);
      break;
    case EvalSourceKind::kCsv:
      eval = LoadCsvDataset(config.eval.path, config.eval.schema);
      if (eval.ok() && config.eval.normalize) {
        eval = NormalizeDataset(*eval, false);
      }
      break;
  }
  if (!eval.ok()) return eval.status();
  in.eval_set = *std::move(eval);
  if (!in.eval_set.empty() && in.eval_set.dim != in.data.dim) {
    return absl::InvalidArgumentError(
        absl::StrCat("evaluation set has dimension ", in.eval_set.dim,
                     " but training data has ", in.data.dim));
  }

  switch (config.cost.goal) {
    case AttackGoal::kParameterTargeting: {
      Vector target = config.cost.target;
      if (target.size() == 0) {
        absl::StatusOr<ModelParams> fit = TrainBaseLearner(
            config.victim, in.eval_set, config.attack.solver);
        if (!fit.ok()) return fit.status();
        target = fit->theta;
      }
      in.cost = ParameterTargetingCost(std::move(target));
      break;
    }
    case AttackGoal::kLabelTargeting:
      in.cost = LabelTargetingCost(in.eval_set, config.cost.loss);
      break;
    case AttackGoal::kLabelAversion:
      in.cost = LabelAversionCost(in.eval_set, config.cost.loss);
      break;
  }
  in.cost.cbar = config.cost.cbar;
  if (absl::Status s = ValidateCost(in.cost, in.data.dim); !s.ok()) return s;
  return in;
}

bool ExperimentResult::AllSound() const {
  if (points.empty()) return false;
  for (const SweepPoint& p : points) {
    if (!p.sound) return false;
  }
  return true;
}

absl::StatusOr<CostEstimate> EvaluateDataset(const ExperimentConfig& config,
                                             const ExperimentInputs& inputs,
                                             const Dataset& data) {
  return EstimateAttackCost(config.victim, data, inputs.cost,
                            config.attack.eval_samples, config.seed,
                            config.threads, config.attack.solver);
}

absl::StatusOr<double> BoundForEstimate(const VictimSpec& victim,
                                        const CostSpec& cost,
                                        const CostEstimate& clean, int k,
                                        double* j_used) {
  double j = clean.mean - 2.0 * clean.std_error;
  if (cost.sign() == CostSign::kNonNegative) {
    j = std::max(j, 0.0);
  } else {
    j = std::min(j, 0.0);
  }
  if (j_used != nullptr) *j_used = j;
  BoundQuery q;
  q.j_clean = j;
  q.epsilon = victim.epsilon;
  q.delta = victim.delta;
  q.k = k;
  q.cbar = cost.cbar;
  q.sign = cost.sign();
  return LowerBound(q);
}

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  std::string trace_csv;
  std::vector<std::string> poisoned_files;
  const bool sweeping = config.sweep.kind != SweepKind::kNone;
  const std::string x_name =
      sweeping ? SweepColumn(config.sweep.kind) : std::string("iteration");

  absl::StatusOr<ExperimentInputs> inputs = BuildInputs(config);
  if (!inputs.ok()) {
    result.status = inputs.status();
  } else {
    const Dataset& data = inputs->data;
    const int n = data.size();
    std::vector<double> values = config.sweep.values;
    if (!sweeping) values = {0.0};

    std::optional<CostEstimate> shared_clean;
    std::optional<Dataset> shared_relaxed;
    for (double value : values) {
      ExperimentConfig point_config = config;
      SweepPoint point;
      point.k = config.attack.k < 0 ? n : config.attack.k;
      point.epsilon = config.victim.epsilon;
      if (config.sweep.kind == SweepKind::kBudget) {
        point.k = static_cast<int>(value);
      }
      if (config.sweep.kind == SweepKind::kEpsilon) point.epsilon = value;
      point_config.victim.epsilon = point.epsilon;
      point_config.attack.k = point.k;
      const VictimSpec& victim = point_config.victim;
      const AttackConfig& attack = point_config.attack;
      const std::string label =
          config.sweep.kind == SweepKind::kBudget
              ? absl::StrCat("k = ", point.k)
              : absl::StrCat("epsilon = ", FormatDouble(point.epsilon));

      absl::Status status = ValidateAttackConfig(attack, n);
      if (status.ok() && config.sweep.kind == SweepKind::kBudget &&
          attack.selection == Selection::kAll) {
        status = absl::InvalidArgumentError(
            "a k sweep cannot use selection 'all'");
      }
      if (!status.ok()) {
        result.status = absl::Status(status.code(),
                                     absl::StrCat(label, ": ", status.message()));
        break;
      }

      if (shared_clean.has_value()) {
        point.clean = *shared_clean;
      } else {
        absl::StatusOr<CostEstimate> clean =
            EvaluateDataset(point_config, *inputs, data);
        if (!clean.ok()) {
          result.status = clean.status();
          break;
        }
        point.clean = *clean;
        if (config.sweep.kind != SweepKind::kEpsilon) shared_clean = *clean;
      }

      absl::StatusOr<std::vector<int>> selected;
      if (attack.selection == Selection::kAll) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        selected = std::move(all);
      } else if (attack.selection == Selection::kShallow) {
        selected = SelectShallow(victim, data, inputs->cost, attack);
      } else if (config.sweep.kind == SweepKind::kBudget && point.k > 0 &&
                 point.k < n) {
        if (!shared_relaxed.has_value()) {
          absl::StatusOr<Dataset> relaxed = RelaxedAttack(
              victim, data, inputs->cost, attack,
              attack.relaxed_iterations.value_or(attack.iterations));
          if (!relaxed.ok()) {
            result.status = relaxed.status();
            break;
          }
          shared_relaxed = *std::move(relaxed);
        }
        selected = MostModified(*shared_relaxed, data, victim.base, point.k);
      } else {
        selected = SelectDeep(victim, data, inputs->cost, attack);
      }
      if (!selected.ok()) {
        result.status = absl::Status(
            selected.status().code(),
            absl::StrCat(label, ": ", selected.status().message()));
        break;
      }
      point.selected = *selected;

      AttackTrace trace =
          RunAttackOnItems(victim, data, inputs->cost, attack, *selected);
      AppendTrace(config, trace,
                  sweeping ? absl::StrCat(FormatDouble(value), ",") : "",
                  trace_csv);
      point.poisoned_data = trace.poisoned;
      if (!trace.status.ok()) {
        result.status = sweeping ? absl::Status(trace.status.code(),
                                                absl::StrCat(label, ": ",
                                                             trace.status.message()))
                                 : trace.status;
        if (!sweeping) result.trace = std::move(trace);
        break;
      }
      const AttackSnapshot& final_snap = trace.snapshots.back();
      point.surrogate_cost = final_snap.surrogate_cost;
      absl::StatusOr<ModelParams> surrogate =
          TrainBaseLearner(victim, trace.poisoned, attack.solver);
      if (surrogate.ok()) point.surrogate_model = surrogate->theta;

      absl::StatusOr<double> bound = BoundForEstimate(
          victim, inputs->cost, point.clean, point.k, &point.bound_j_clean);
      if (!bound.ok()) {
        result.status = bound.status();
        break;
      }
      point.lower_bound = *bound;

      if (!sweeping) {
        const int last = static_cast<int>(trace.snapshots.size()) - 1;
        for (int s = 0; s <= last; ++s) {
          const bool wanted =
              s == 0 || s == last || (config.eval_every > 0 && s % config.eval_every == 0);
          if (!wanted) continue;
          CostEstimate estimate = point.clean;
          if (s > 0) {
            absl::StatusOr<CostEstimate> e = EvaluateDataset(
                point_config, *inputs,
                Materialize(data, trace, trace.snapshots[s]));
            if (!e.ok()) {
              status = e.status();
              break;
            }
            estimate = *e;
          }
          result.curve.push_back(
              {static_cast<double>(trace.snapshots[s].iteration), estimate,
               point.lower_bound});
        }
        if (!status.ok()) {
          result.status = status;
          result.trace = std::move(trace);
          break;
        }
        point.poisoned = result.curve.back().estimate;
        result.trace = std::move(trace);
      } else {
        absl::StatusOr<CostEstimate> poisoned =
            EvaluateDataset(point_config, *inputs, point.poisoned_data);
        if (!poisoned.ok()) {
          result.status = poisoned.status();
          break;
        }
        point.poisoned = *poisoned;
        result.curve.push_back({value, point.poisoned, point.lower_bound});
      }
      point.sound =
          point.poisoned.mean - 2.0 * point.poisoned.std_error >= point.lower_bound;
      result.points.push_back(std::move(point));
    }
  }

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (config.out_dir.empty()) return result;

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  const std::filesystem::path dir(config.out_dir);
  std::vector<absl::Status> write_errors;

  const int dim = inputs.ok() ? inputs->data.dim : 0;
  std::string trace_header = sweeping ? absl::StrCat(x_name, ",") : "";
  absl::StrAppend(&trace_header, "iteration,item");
  for (int c = 0; c < dim; ++c) absl::StrAppend(&trace_header, ",x", c);
  absl::StrAppend(&trace_header, ",y\n");
  write_errors.push_back(
      WriteText((dir / "trace.csv").string(), trace_header + trace_csv));

  std::string curve = absl::StrCat(x_name, ",mean,stderr,lower_bound\n");
  for (const CurveRow& row : result.curve) {
    absl::StrAppend(&curve, FormatDouble(row.x), ",",
                    FormatDouble(row.estimate.mean), ",",
                    FormatDouble(row.estimate.std_error), ",",
                    FormatDouble(row.lower_bound), "\n");
  }
  write_errors.push_back(WriteText((dir / "curve.csv").string(), curve));

  for (std::size_t p = 0; p < result.points.size(); ++p) {
    const std::string name =
        sweeping ? absl::StrCat("poisoned_", p, ".csv") : "poisoned.csv";
    poisoned_files.push_back(name);
    write_errors.push_back(
        WriteDatasetCsv(result.points[p].poisoned_data, (dir / name).string()));
  }
  if (!sweeping && result.points.empty() && result.trace.has_value()) {
    poisoned_files.push_back("poisoned.csv");
    write_errors.push_back(WriteDatasetCsv(result.trace->poisoned,
                                           (dir / "poisoned.csv").string()));
  }

  Json summary;
  summary["status"] = result.status.ok() ? "ok" : result.status.ToString();
  summary["seed"] = config.seed;
  summary["kernels"] = kernels::IsaName(kernels::ActiveIsa());
  summary["config"] = ExperimentConfigToJson(config);
  if (inputs.ok()) {
    Json data;
    data["n"] = inputs->data.size();
    data["dim"] = inputs->data.dim;
    data["eval_size"] = inputs->eval_set.size();
    data["eval_seed_index"] = inputs->eval_seed_index;
    if (inputs->cost.goal == AttackGoal::kParameterTargeting) {
      data["target_model"] = FromVector(inputs->cost.target_model);
    }
    summary["inputs"] = data;
  }
  Json points = Json::array();
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    const SweepPoint& point = result.points[p];
    Json jp;
    jp["k"] = point.k;
    jp["epsilon"] = point.epsilon;
    jp["selected"] = point.selected;
    jp["clean"] = EstimateJson(point.clean);
    jp["poisoned"] = EstimateJson(point.poisoned);
    jp["bound_j_clean"] = point.bound_j_clean;
    jp["lower_bound"] = point.lower_bound;
    jp["sound"] = point.sound;
    jp["surrogate_model"] = FromVector(point.surrogate_model);
    jp["surrogate_cost"] = point.surrogate_cost;
    jp["poisoned_file"] = poisoned_files[p];
    points.push_back(jp);
  }
  summary["points"] = points;
  summary["sound"] = result.AllSound();
  summary["runtime_seconds"] = result.runtime_seconds;
  write_errors.push_back(
      WriteText((dir / "summary.json").string(), summary.dump(2) + "\n"));

  if (result.status.ok()) {
    for (const absl::Status& s : write_errors) {
      if (!s.ok()) {
        result.status = s;
        break;
      }
    }
  }
  return result;
}

}  // namespace dppoison
