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

#ifndef FAIRVAX_EXPERIMENT_H_
#define FAIRVAX_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairvax/config.h"
#include "fairvax/disease_model.h"
#include "fairvax/fairness_metrics.h"
#include "fairvax/im_selector.h"
#include "fairvax/mobility_network.h"
#include "fairvax/synthetic.h"
#include "json.hpp"

namespace fairvax {

inline constexpr char kCodeVersion[] = "fairvax 1.0.0";

struct ExperimentConfig {
  // Network source: a directory with the three CSV files, or else the
  // synthetic generator.
  std::filesystem::path network_dir;
  SyntheticSpec synthetic;
  uint64_t network_seed = 1;

  DiseaseParams params;
  std::vector<StrategyKind> strategies{std::begin(kAllStrategies),
                                       std::end(kAllStrategies)};
  double budget_fraction = 0.05;
  int selection_window_hours = 336;
  int horizon_hours = 840;
  int n_seeds = 30;
  int sigma_replicates = 5;
  SimulationMode sigma_mode = SimulationMode::kStochastic;
  bool lazy_eval = true;
  uint64_t selection_seed = 1;
  uint64_t evaluation_seed = 2;
  // RAND is averaged over this many random selections.
  int rand_selection_seeds = 3;

  // Not part of the config hash.
  std::filesystem::path output_dir;
  int workers = 1;

  absl::Status Validate() const;
  // Canonical form of every field that affects results.
  nlohmann::json ToJson() const;
  // Hex FNV-1a of ToJson().dump().
  std::string Hash() const;
};

// Keys: network_dir, network_seed, synthetic.<SyntheticSpec field>,
// beta_home, psi, p0, delta_e_hours, delta_i_hours, strategies,
// budget_fraction, selection_window_hours, horizon_hours, n_seeds,
// sigma_replicates, mean_field, lazy_eval, selection_seed, evaluation_seed,
// rand_selection_seeds, output_dir, workers.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const KeyValueConfig& config);

// Raw outcome of one evaluation run.
struct RunOutcome {
  uint64_t rng_seed = 0;
  double eir_total = 0.0;
  std::vector<double> eir_by_race;
  std::vector<double> eir_by_income;
  double risk_weighted_eir = 0.0;
  std::optional<double> treatment_kl_race;
  std::optional<double> treatment_kl_income;
  std::optional<double> outcome_kl_race;
  std::optional<double> outcome_kl_income;
};

// Full-horizon run with every CBG seeded and `selected` vaccinated at
// `vaccination_hour`.
absl::StatusOr<RunOutcome> EvaluateRun(const MobilityNetwork& network,
                                       const DiseaseParams& params,
                                       const std::vector<int>& selected,
                                       int vaccination_hour, int horizon_hours,
                                       uint64_t rng_seed);

struct RunRecord {
  StrategyKind strategy = StrategyKind::kNone;
  int seed_index = 0;
  int selection_variant = 0;
  RunOutcome outcome;
  // Relative to the unvaccinated run with the same seed.
  double pct_decrease = 0.0;
  double risk_weighted_pct_decrease = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  // Sample standard deviation; 0 for a single value.
  double std = 0.0;
  int count = 0;
};

MetricSummary Summarize(const std::vector<double>& values);

struct StrategySummary {
  StrategyKind strategy = StrategyKind::kNone;
  // Metric name -> summary over seeds. Names: eir_total, pct_decrease,
  // risk_weighted_eir, risk_weighted_pct_decrease, treatment_kl_race,
  // treatment_kl_income, outcome_kl_race, outcome_kl_income, budget_used.
  std::map<std::string, MetricSummary> metrics;
};

struct ExperimentReport {
  std::string config_hash;
  std::string code_version = kCodeVersion;
  std::string generated_at;
  nlohmann::json config;
  std::vector<uint64_t> evaluation_seeds;
  // Per strategy, the selections used (RAND has several).
  std::map<StrategyKind, std::vector<SelectionResult>> selections;
  // Sorted by strategy (config order) then seed index.
  std::vector<RunRecord> records;
  std::vector<StrategySummary> summaries;
  // Strategy name -> diagnostic for cells that failed.
  std::map<std::string, std::string> failures;
};

// Runs the whole matrix. Cells already present under
// <output_dir>/cells/<config hash>/ are reused. Writes report.json into
// output_dir when it is set.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               const MobilityNetwork& network);
// Builds the network from the config first.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

absl::StatusOr<MobilityNetwork> BuildNetwork(const ExperimentConfig& config);

nlohmann::json ReportToJson(const ExperimentReport& report,
                            const MobilityNetwork& network);

// Writes performance.csv and fairness.csv from a report JSON.
absl::Status ExportPlotData(const nlohmann::json& report,
                            const std::filesystem::path& out_dir);

}  // namespace fairvax

#endif  // FAIRVAX_EXPERIMENT_H_
