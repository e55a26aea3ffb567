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

#ifndef FAIRVAX_FAIRNESS_METRICS_H_
#define FAIRVAX_FAIRNESS_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fairvax/disease_model.h"
#include "fairvax/mobility_network.h"

namespace fairvax {

struct GroupDistribution {
  Grouping grouping = Grouping::kRace;
  std::vector<double> values;
};

// D_KL(p || q) in nats, with 0 * ln(0 / q) = 0. Groups with q = 0 and p = 0
// are dropped from the support (a warning is appended if `warnings` is set);
// p > 0 where q = 0 is an error.
absl::StatusOr<double> KlDivergence(const GroupDistribution& p,
                                    const GroupDistribution& q,
                                    std::vector<std::string>* warnings = nullptr);

// q(j) = N_j / N.
GroupDistribution ReferenceDistribution(const MobilityNetwork& network,
                                        Grouping grouping);

// Share of each group among the residents of the selected CBGs.
absl::StatusOr<GroupDistribution> TreatmentDistribution(
    const MobilityNetwork& network, std::span<const int> selected,
    Grouping grouping);

// Share of each group among exposed-or-worse residents at the horizon.
absl::StatusOr<GroupDistribution> OutcomeDistribution(
    const SimulationResult& result, const MobilityNetwork& network,
    Grouping grouping);

// 100 * (baseline - strategy) / baseline. Negative when the strategy is worse.
absl::StatusOr<double> PctDecrease(double baseline_eir, double strategy_eir);

// sum_i mu_i * EIR_i over the final state.
double RiskWeightedEir(const SimulationResult& result,
                       const MobilityNetwork& network);

// Per group: 1 - post / pre total visit weight, with visits apportioned to
// groups by the origin CBG (racial fractions for race).
absl::StatusOr<std::vector<double>> MobilityReduction(
    const MobilityNetwork& pre, const MobilityNetwork& post, Grouping grouping);

struct FairnessReport {
  std::optional<double> treatment_kl_race;
  std::optional<double> treatment_kl_income;
  std::optional<double> outcome_kl_race;
  std::optional<double> outcome_kl_income;
  GroupDistribution reference_race;
  GroupDistribution reference_income;
  std::optional<GroupDistribution> treatment_race;
  std::optional<GroupDistribution> treatment_income;
  std::optional<GroupDistribution> outcome_race;
  std::optional<GroupDistribution> outcome_income;
};

// Treatment scores are absent for an empty selection, outcome scores for a
// run without infections.
FairnessReport EvaluateFairness(const MobilityNetwork& network,
                                std::span<const int> selected,
                                const SimulationResult& result);

}  // namespace fairvax

#endif  // FAIRVAX_FAIRNESS_METRICS_H_
