// Copyright 2026 The Authors.
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

#include "fairvax/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fairvax/network_io.h"
#include "fairvax/parallel.h"
#include "fairvax/random.h"
#include "fairvax/selection_io.h"
#include "fairvax/status_macros.h"

namespace fairvax {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kReportFileName[] = "report.json";

json SyntheticSpecToJson(const SyntheticSpec& s) {
  return {{"num_cbgs", s.num_cbgs},
          {"num_pois", s.num_pois},
          {"num_race_groups", s.num_race_groups},
          {"horizon_hours", s.horizon_hours},
          {"mean_visits_per_hour", s.mean_visits_per_hour},
          {"pois_per_cbg", s.pois_per_cbg},
          {"min_population", s.min_population},
          {"max_population", s.max_population},
          {"mixing", s.mixing == RaceMixing::kSegregated ? "segregated" : "mixed"},
          {"segregation", s.segregation},
          {"median_income", s.median_income},
          {"income_dispersion", s.income_dispersion},
          {"mean_age", s.mean_age},
          {"age_sd", s.age_sd},
          {"age_income_slope", s.age_income_slope},
          {"mobility_dispersion", s.mobility_dispersion},
          {"income_mobility_gradient", s.income_mobility_gradient},
          {"age_mobility_decay", s.age_mobility_decay},
          {"poi_popularity_exponent", s.poi_popularity_exponent},
          {"mean_poi_area_sqft", s.mean_poi_area_sqft},
          {"poi_area_dispersion", s.poi_area_dispersion},
          {"min_dwell_fraction", s.min_dwell_fraction},
          {"max_dwell_fraction", s.max_dwell_fraction}};
}

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> OptionalFromJson(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json OutcomeToJson(const RunOutcome& o) {
  return {{"rng_seed", o.rng_seed},
          {"eir_total", o.eir_total},
          {"eir_by_race", o.eir_by_race},
          {"eir_by_income", o.eir_by_income},
          {"risk_weighted_eir", o.risk_weighted_eir},
          {"treatment_kl_race", OptionalToJson(o.treatment_kl_race)},
          {"treatment_kl_income", OptionalToJson(o.treatment_kl_income)},
          {"outcome_kl_race", OptionalToJson(o.outcome_kl_race)},
          {"outcome_kl_income", OptionalToJson(o.outcome_kl_income)}};
}

absl::StatusOr<RunOutcome> OutcomeFromJson(const json& j) {
  RunOutcome o;
  try {
    o.rng_seed = j.at("rng_seed").get<uint64_t>();
    o.eir_total = j.at("eir_total").get<double>();
    o.eir_by_race = j.at("eir_by_race").get<std::vector<double>>();
    o.eir_by_income = j.at("eir_by_income").get<std::vector<double>>();
    o.risk_weighted_eir = j.at("risk_weighted_eir").get<double>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed cell record: ", e.what()));
  }
  o.treatment_kl_race = OptionalFromJson(j, "treatment_kl_race");
  o.treatment_kl_income = OptionalFromJson(j, "treatment_kl_income");
  o.outcome_kl_race = OptionalFromJson(j, "outcome_kl_race");
  o.outcome_kl_income = OptionalFromJson(j, "outcome_kl_income");
  return o;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CellTask {
  StrategyKind strategy = StrategyKind::kNone;
  int seed_index = 0;
  int variant = 0;
  const SelectionResult* selection = nullptr;
  fs::path path;
};

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  RETURN_IF_ERROR(params.Validate());
  if (network_dir.empty()) RETURN_IF_ERROR(synthetic.Validate());
  if (strategies.empty()) {
    return absl::InvalidArgumentError("at least one strategy is required");
  }
  if (!(budget_fraction > 0 && budget_fraction <= 1)) {
    return absl::InvalidArgumentError("budget_fraction must be in (0, 1]");
  }
  if (selection_window_hours < 0 || horizon_hours < selection_window_hours) {
    return absl::InvalidArgumentError(
        "need 0 <= selection_window_hours <= horizon_hours");
  }
  if (n_seeds < 1 || sigma_replicates < 1 || rand_selection_seeds < 1) {
    return absl::InvalidArgumentError(
        "n_seeds, sigma_replicates and rand_selection_seeds must be >= 1");
  }
  return absl::OkStatus();
}

json ExperimentConfig::ToJson() const {
  json j;
  if (!network_dir.empty()) {
    j["network"] = {{"dir", fs::absolute(network_dir).lexically_normal().string()}};
  } else {
    j["network"] = {{"synthetic", SyntheticSpecToJson(synthetic)},
                    {"seed", network_seed}};
  }
  j["params"] = {{"beta_home", params.beta_home},
                 {"psi", params.psi},
                 {"p0", params.p0},
                 {"delta_e_hours", params.delta_e_hours},
                 {"delta_i_hours", params.delta_i_hours}};
  json names = json::array();
  for (StrategyKind k : strategies) names.push_back(std::string(StrategyName(k)));
  j["strategies"] = std::move(names);
  j["budget_fraction"] = budget_fraction;
  j["selection_window_hours"] = selection_window_hours;
  j["horizon_hours"] = horizon_hours;
  j["n_seeds"] = n_seeds;
  j["sigma_replicates"] = sigma_replicates;
  j["mean_field"] = sigma_mode == SimulationMode::kMeanField;
  j["lazy_eval"] = lazy_eval;
  j["selection_seed"] = selection_seed;
  j["evaluation_seed"] = evaluation_seed;
  j["rand_selection_seeds"] = rand_selection_seeds;
  return j;
}

std::string ExperimentConfig::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToJson().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", h);
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const KeyValueConfig& kv) {
  KeyValueConfig top;
  for (const auto& [key, value] : kv.entries()) {
    if (key.rfind("synthetic.", 0) != 0) top.Set(key, value);
  }
  RETURN_IF_ERROR(top.CheckKnownKeys(
      {"network_dir", "network_seed", "beta_home", "psi", "p0",
       "delta_e_hours", "delta_i_hours", "strategies", "budget_fraction",
       "selection_window_hours", "horizon_hours", "n_seeds",
       "sigma_replicates", "mean_field", "lazy_eval", "selection_seed",
       "evaluation_seed", "rand_selection_seeds", "output_dir", "workers"}));

  ExperimentConfig c;
  c.network_dir = kv.GetString("network_dir", "");
  ASSIGN_OR_RETURN(c.synthetic, ParseSyntheticSpec(kv.WithPrefix("synthetic.")));
  ASSIGN_OR_RETURN(int64_t network_seed, kv.GetInt("network_seed", 1));
  c.network_seed = static_cast<uint64_t>(network_seed);
  ASSIGN_OR_RETURN(c.params, ParseDiseaseParams(kv));
  if (kv.Has("strategies")) {
    c.strategies.clear();
    for (const std::string& name : kv.GetList("strategies")) {
      ASSIGN_OR_RETURN(StrategyKind kind, ParseStrategy(name));
      c.strategies.push_back(kind);
    }
  }
  ASSIGN_OR_RETURN(c.budget_fraction,
                   kv.GetDouble("budget_fraction", c.budget_fraction));
  auto get_int = [&](const char* key, int* out) -> absl::Status {
    ASSIGN_OR_RETURN(int64_t v, kv.GetInt(key, *out));
    *out = static_cast<int>(v);
    return absl::OkStatus();
  };
  RETURN_IF_ERROR(get_int("selection_window_hours", &c.selection_window_hours));
  RETURN_IF_ERROR(get_int("horizon_hours", &c.horizon_hours));
  RETURN_IF_ERROR(get_int("n_seeds", &c.n_seeds));
  RETURN_IF_ERROR(get_int("sigma_replicates", &c.sigma_replicates));
  RETURN_IF_ERROR(get_int("rand_selection_seeds", &c.rand_selection_seeds));
  c.workers = DefaultWorkerCount();
  RETURN_IF_ERROR(get_int("workers", &c.workers));
  ASSIGN_OR_RETURN(bool mean_field, kv.GetBool("mean_field", false));
  c.sigma_mode =
      mean_field ? SimulationMode::kMeanField : SimulationMode::kStochastic;
  ASSIGN_OR_RETURN(c.lazy_eval, kv.GetBool("lazy_eval", c.lazy_eval));
  ASSIGN_OR_RETURN(int64_t selection_seed, kv.GetInt("selection_seed", 1));
  ASSIGN_OR_RETURN(int64_t evaluation_seed, kv.GetInt("evaluation_seed", 2));
  c.selection_seed = static_cast<uint64_t>(selection_seed);
  c.evaluation_seed = static_cast<uint64_t>(evaluation_seed);
  c.output_dir = kv.GetString("output_dir", "");
  RETURN_IF_ERROR(c.Validate());
  return c;
}

absl::StatusOr<RunOutcome> EvaluateRun(const MobilityNetwork& network,
                                       const DiseaseParams& params,
                                       const std::vector<int>& selected,
                                       int vaccination_hour, int horizon_hours,
                                       uint64_t rng_seed) {
  const SeirSimulator simulator(network, params);
  RunOptions options;
  options.seeded.resize(network.num_cbgs());
  std::iota(options.seeded.begin(), options.seeded.end(), 0);
  options.vaccinated = selected;
  options.vaccination_hour = vaccination_hour;
  options.horizon_hours = horizon_hours;
  options.rng_seed = rng_seed;
  ASSIGN_OR_RETURN(SimulationResult result, simulator.Run(options));

  RunOutcome out;
  out.rng_seed = rng_seed;
  out.eir_total = result.eir_total;
  out.eir_by_race = result.eir_by_race;
  out.eir_by_income = result.eir_by_income;
  out.risk_weighted_eir = RiskWeightedEir(result, network);
  const FairnessReport fairness = EvaluateFairness(network, selected, result);
  out.treatment_kl_race = fairness.treatment_kl_race;
  out.treatment_kl_income = fairness.treatment_kl_income;
  out.outcome_kl_race = fairness.outcome_kl_race;
  out.outcome_kl_income = fairness.outcome_kl_income;
  return out;
}

MetricSummary Summarize(const std::vector<double>& values) {
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
  if (s.count > 1) {
    // Deviations from the first value so identical inputs give exactly 0.
    const double shift = values.front();
    double sum = 0.0, sum_sq = 0.0;
    for (double v : values) {
      sum += v - shift;
      sum_sq += (v - shift) * (v - shift);
    }
    const double ss = std::max(0.0, sum_sq - sum * sum / s.count);
    s.std = std::sqrt(ss / (s.count - 1));
  }
  return s;
}

absl::StatusOr<MobilityNetwork> BuildNetwork(const ExperimentConfig& config) {
  if (!config.network_dir.empty()) return LoadNetworkDir(config.network_dir);
  return GenerateSynthetic(config.synthetic, config.network_seed);
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config) {
  ASSIGN_OR_RETURN(MobilityNetwork network, BuildNetwork(config));
  return RunExperiment(config, network);
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const MobilityNetwork& network) {
  RETURN_IF_ERROR(config.Validate());
  ExperimentReport report;
  report.config = config.ToJson();
  report.config_hash = config.Hash();
  for (int k = 0; k < config.n_seeds; ++k) {
    report.evaluation_seeds.push_back(DeriveSeed(config.evaluation_seed, k));
  }
  const fs::path cell_root =
      config.output_dir.empty()
          ? fs::path()
          : config.output_dir / "cells" / report.config_hash;
  auto cell_path = [&](StrategyKind kind, const std::string& file) {
    return cell_root.empty() ? fs::path()
                             : cell_root / std::string(StrategyName(kind)) / file;
  };

  // Selections, once per strategy (RAND: once per selection seed).
  for (StrategyKind kind : config.strategies) {
    if (report.selections.count(kind)) continue;
    const int variants =
        kind == StrategyKind::kRandom ? config.rand_selection_seeds : 1;
    std::vector<SelectionResult> chosen;
    for (int v = 0; v < variants; ++v) {
      const fs::path path =
          cell_path(kind, absl::StrCat("selection_", v, ".json"));
      if (!path.empty() && fs::exists(path)) {
        absl::StatusOr<json> saved = ReadJsonFile(path);
        if (saved.ok()) {
          absl::StatusOr<SelectionResult> loaded =
              SelectionFromJson(*saved, network);
          if (loaded.ok()) {
            chosen.push_back(*std::move(loaded));
            continue;
          }
        }
      }
      StrategySpec spec;
      spec.kind = kind;
      spec.budget_fraction = config.budget_fraction;
      spec.lazy_eval = config.lazy_eval;
      spec.sigma_replicates = config.sigma_replicates;
      spec.selection_window_hours = config.selection_window_hours;
      spec.sigma_mode = config.sigma_mode;
      const uint64_t seed = kind == StrategyKind::kRandom
                                ? DeriveSeed(config.selection_seed, 1000 + v)
                                : config.selection_seed;
      absl::StatusOr<SelectionResult> selection =
          SelectStrategy(network, config.params, spec, seed, config.workers);
      if (!selection.ok()) {
        report.failures[std::string(StrategyName(kind))] =
            std::string(selection.status().message());
        break;
      }
      if (!path.empty()) {
        absl::Status written =
            WriteJsonFile(path, SelectionToJson(*selection, network));
        if (!written.ok()) {
          report.failures[std::string(StrategyName(kind))] =
              std::string(written.message());
          break;
        }
      }
      chosen.push_back(*std::move(selection));
    }
    if (chosen.size() == static_cast<size_t>(variants)) {
      report.selections[kind] = std::move(chosen);
    }
  }

  // Evaluation cells. The unvaccinated baseline always runs.
  SelectionResult no_vaccination;
  std::vector<CellTask> tasks;
  auto add_cells = [&](StrategyKind kind,
                       const std::vector<SelectionResult>& selections) {
    for (int k = 0; k < config.n_seeds; ++k) {
      CellTask task;
      task.strategy = kind;
      task.seed_index = k;
      task.variant = k % static_cast<int>(selections.size());
      task.selection = &selections[task.variant];
      task.path = cell_path(kind, absl::StrCat("seed_", k, ".json"));
      tasks.push_back(std::move(task));
    }
  };
  const std::vector<SelectionResult> baseline_selection{no_vaccination};
  add_cells(StrategyKind::kNone, baseline_selection);
  for (StrategyKind kind : config.strategies) {
    if (kind == StrategyKind::kNone) continue;
    auto it = report.selections.find(kind);
    if (it != report.selections.end()) add_cells(kind, it->second);
  }

  std::vector<absl::StatusOr<RunOutcome>> outcomes(
      tasks.size(), absl::UnknownError("not run"));
  ParallelFor(config.workers, tasks.size(), [&](size_t t) {
    const CellTask& task = tasks[t];
    if (!task.path.empty() && fs::exists(task.path)) {
      absl::StatusOr<json> saved = ReadJsonFile(task.path);
      if (saved.ok()) {
        outcomes[t] = OutcomeFromJson(*saved);
        if (outcomes[t].ok()) return;
      }
    }
    outcomes[t] = EvaluateRun(network, config.params, task.selection->selected,
                              config.selection_window_hours,
                              config.horizon_hours,
                              report.evaluation_seeds[task.seed_index]);
    if (outcomes[t].ok() && !task.path.empty()) {
      absl::Status written = WriteJsonFile(task.path, OutcomeToJson(*outcomes[t]));
      if (!written.ok()) outcomes[t] = written;
    }
  });

  std::vector<const RunOutcome*> baseline(config.n_seeds, nullptr);
  for (size_t t = 0; t < tasks.size(); ++t) {
    if (tasks[t].strategy != StrategyKind::kNone) continue;
    if (!outcomes[t].ok()) {
      return absl::InternalError(absl::StrCat(
          "baseline run failed: ", outcomes[t].status().message()));
    }
    baseline[tasks[t].seed_index] = &*outcomes[t];
  }

  for (StrategyKind kind : config.strategies) {
    const std::string name(StrategyName(kind));
    if (report.failures.count(name)) continue;
    std::vector<RunRecord> records;
    for (size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].strategy != kind) continue;
      if (!outcomes[t].ok()) {
        report.failures[name] = std::string(outcomes[t].status().message());
        break;
      }
      const RunOutcome& base = *baseline[tasks[t].seed_index];
      RunRecord rec;
      rec.strategy = kind;
      rec.seed_index = tasks[t].seed_index;
      rec.selection_variant = tasks[t].variant;
      rec.outcome = *outcomes[t];
      absl::StatusOr<double> pct = PctDecrease(base.eir_total, rec.outcome.eir_total);
      absl::StatusOr<double> risk_pct =
          PctDecrease(base.risk_weighted_eir, rec.outcome.risk_weighted_eir);
      if (!pct.ok() || !risk_pct.ok()) {
        report.failures[name] =
            "baseline run has no infections; percentage decrease undefined";
        break;
      }
      rec.pct_decrease = *pct;
      rec.risk_weighted_pct_decrease = *risk_pct;
      records.push_back(std::move(rec));
    }
    if (report.failures.count(name)) continue;

    StrategySummary summary;
    summary.strategy = kind;
    std::map<std::string, std::vector<double>> columns;
    for (const RunRecord& r : records) {
      columns["eir_total"].push_back(r.outcome.eir_total);
      columns["pct_decrease"].push_back(r.pct_decrease);
      columns["risk_weighted_eir"].push_back(r.outcome.risk_weighted_eir);
      columns["risk_weighted_pct_decrease"].push_back(
          r.risk_weighted_pct_decrease);
      const SelectionResult& sel =
          kind == StrategyKind::kNone
              ? no_vaccination
              : report.selections.at(kind)[r.selection_variant];
      columns["budget_used"].push_back(sel.budget_used);
      auto add = [&](const char* key, const std::optional<double>& v) {
        if (v) columns[key].push_back(*v);
      };
      add("treatment_kl_race", r.outcome.treatment_kl_race);
      add("treatment_kl_income", r.outcome.treatment_kl_income);
      add("outcome_kl_race", r.outcome.outcome_kl_race);
      add("outcome_kl_income", r.outcome.outcome_kl_income);
    }
    for (const auto& [key, values] : columns) {
      summary.metrics[key] = Summarize(values);
    }
    report.summaries.push_back(std::move(summary));
    report.records.insert(report.records.end(),
                          std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
  }

  report.generated_at = UtcTimestamp();
  if (!config.output_dir.empty()) {
    RETURN_IF_ERROR(WriteJsonFile(config.output_dir / kReportFileName,
                                  ReportToJson(report, network)));
  }
  return report;
}

json ReportToJson(const ExperimentReport& report,
                  const MobilityNetwork& network) {
  json out;
  out["code_version"] = report.code_version;
  out["config_hash"] = report.config_hash;
  out["generated_at"] = report.generated_at;
  out["config"] = report.config;
  out["provenance"] = {{"evaluation_seeds", report.evaluation_seeds},
                       {"selection_seed", report.config.at("selection_seed")},
                       {"network_total_population", network.total_population()},
                       {"network_cbgs", network.num_cbgs()}};

  json strategies = json::array();
  json summary = json::object();
  for (const StrategySummary& s : report.summaries) {
    const std::string name(StrategyName(s.strategy));
    strategies.push_back(name);
    json metrics = json::object();
    for (const auto& [key, m] : s.metrics) {
      metrics[key] = {{"mean", m.mean}, {"std", m.std}, {"n", m.count}};
    }
    summary[name] = std::move(metrics);
  }
  out["strategies"] = std::move(strategies);
  out["summary"] = std::move(summary);

  json selections = json::object();
  for (const auto& [kind, list] : report.selections) {
    json arr = json::array();
    for (const SelectionResult& s : list) arr.push_back(SelectionToJson(s, network));
    selections[std::string(StrategyName(kind))] = std::move(arr);
  }
  out["selections"] = std::move(selections);

  json records = json::array();
  for (const RunRecord& r : report.records) {
    json rec = OutcomeToJson(r.outcome);
    rec["strategy"] = std::string(StrategyName(r.strategy));
    rec["seed_index"] = r.seed_index;
    rec["selection_variant"] = r.selection_variant;
    rec["pct_decrease"] = r.pct_decrease;
    rec["risk_weighted_pct_decrease"] = r.risk_weighted_pct_decrease;
    records.push_back(std::move(rec));
  }
  out["records"] = std::move(records);
  out["failures"] = report.failures;
  return out;
}

absl::Status ExportPlotData(const json& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", out_dir.string(), ": ", ec.message()));
  }
  if (!report.contains("strategies") || !report.contains("summary")) {
    return absl::InvalidArgumentError(
        "report JSON lacks 'strategies' or 'summary'");
  }
  auto cell = [](const json& metrics, const char* key, const char* field) {
    if (!metrics.contains(key)) return std::string();
    return FormatDouble(metrics.at(key).at(field).get<double>());
  };
  std::ofstream perf(out_dir / "performance.csv");
  perf << "strategy,pct_decrease_mean,pct_decrease_std,"
          "risk_weighted_pct_decrease_mean,risk_weighted_pct_decrease_std\n";
  std::ofstream fair(out_dir / "fairness.csv");
  fair << "strategy,grouping,metric,kl_mean,kl_std\n";
  for (const json& name_json : report.at("strategies")) {
    const std::string name = name_json.get<std::string>();
    const json& m = report.at("summary").at(name);
    perf << name << ',' << cell(m, "pct_decrease", "mean") << ','
         << cell(m, "pct_decrease", "std") << ','
         << cell(m, "risk_weighted_pct_decrease", "mean") << ','
         << cell(m, "risk_weighted_pct_decrease", "std") << '\n';
    for (const char* grouping : {"race", "income"}) {
      for (const char* metric : {"treatment", "outcome"}) {
        const std::string key = absl::StrCat(metric, "_kl_", grouping);
        fair << name << ',' << grouping << ',' << metric << ','
             << cell(m, key.c_str(), "mean") << ','
             << cell(m, key.c_str(), "std") << '\n';
      }
    }
  }
  if (!perf || !fair) {
    return absl::InternalError(
        absl::StrCat("failed writing CSV files to ", out_dir.string()));
  }
  return absl::OkStatus();
}

}  // namespace fairvax
