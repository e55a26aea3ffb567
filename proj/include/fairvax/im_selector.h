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

#ifndef FAIRVAX_IM_SELECTOR_H_
#define FAIRVAX_IM_SELECTOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "fairvax/disease_model.h"
#include "fairvax/mobility_network.h"

namespace fairvax {

// Slack, in persons, allowed on a group budget when testing feasibility.
inline constexpr double kGroupBudgetSlack = 0.5;

enum class StrategyKind {
  kNone,
  kRandom,       // RAND
  kOldest,       // CS: oldest CBGs first
  kIm,           // IM
  kImRace,       // IM-R
  kImIncome,     // IM-I
  kImAge,        // IM-A
  kImRaceAge,    // IM-RA
  kImIncomeAge,  // IM-IA
};

inline constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::kNone,     StrategyKind::kRandom,    StrategyKind::kOldest,
    StrategyKind::kIm,       StrategyKind::kImRace,    StrategyKind::kImIncome,
    StrategyKind::kImAge,    StrategyKind::kImRaceAge, StrategyKind::kImIncomeAge};

// CLI spelling: none, rand, cs, im, im-r, im-i, im-a, im-ra, im-ia.
absl::string_view StrategyName(StrategyKind kind);
absl::StatusOr<StrategyKind> ParseStrategy(absl::string_view name);

bool IsImStrategy(StrategyKind kind);
// True for the -A variants, which rank by risk-weighted influence.
bool UsesRiskWeights(StrategyKind kind);
// The equal-treatment grouping of IM-R/IM-I and their -A variants.
std::optional<Grouping> FairnessGrouping(StrategyKind kind);

struct StrategySpec {
  StrategyKind kind = StrategyKind::kIm;
  double budget_fraction = 0.05;
  // CELF lazy re-evaluation. Ignored (always off) for the -A variants.
  bool lazy_eval = true;
  int sigma_replicates = 5;
  int selection_window_hours = 336;
  SimulationMode sigma_mode = SimulationMode::kStochastic;

  absl::Status Validate() const;
};

// Per-group vaccine budgets B_j = N_j / N * B and the amounts consumed.
struct GroupBudgets {
  Grouping grouping = Grouping::kRace;
  std::vector<double> budgets;
  std::vector<double> consumed;

  // True if charging CBG `cbg` keeps every group within budget + slack.
  bool CanAfford(const MobilityNetwork& network, int cbg,
                 double slack = kGroupBudgetSlack) const;
};

GroupBudgets ComputeGroupBudgets(const MobilityNetwork& network,
                                 Grouping grouping, double budget);

// Race: every group j is charged n * alpha_j. Income: the CBG's own group is
// charged n. Rejects a charge that would break a group budget.
absl::Status ChargeSelection(GroupBudgets& budgets,
                             const MobilityNetwork& network, int cbg);

// A set function over CBG indices. Implementations must be pure and safe to
// call concurrently.
class InfluenceFunction {
 public:
  virtual ~InfluenceFunction() = default;
  virtual double Evaluate(std::span<const int> seed_set) const = 0;
};

// sigma or sigma_A computed by simulation over the selection window, with
// replicate seeds fixed per selection run.
class SimulationInfluence : public InfluenceFunction {
 public:
  SimulationInfluence(const SeirSimulator& simulator, int window_hours,
                      int replicates, uint64_t rng_seed, SimulationMode mode,
                      bool risk_weighted)
      : simulator_(simulator),
        window_hours_(window_hours),
        replicates_(replicates),
        rng_seed_(rng_seed),
        mode_(mode),
        risk_weighted_(risk_weighted) {}

  double Evaluate(std::span<const int> seed_set) const override;

 private:
  const SeirSimulator& simulator_;
  int window_hours_;
  int replicates_;
  uint64_t rng_seed_;
  SimulationMode mode_;
  bool risk_weighted_;
};

struct GainRecord {
  int cbg = 0;
  // Marginal influence divided by the CBG population.
  double normalized_gain = 0.0;
  double marginal_gain = 0.0;
};

struct SelectionResult {
  StrategyKind strategy = StrategyKind::kNone;
  // Selected CBG indices in selection order.
  std::vector<int> selected;
  double budget = 0.0;
  double budget_used = 0.0;
  // Set for the equal-treatment strategies.
  std::optional<GroupBudgets> group_budgets;
  std::vector<GainRecord> gain_trace;
  int64_t evaluation_count = 0;
  std::vector<std::string> warnings;
};

struct GreedyOptions {
  double budget = 0.0;
  bool lazy_eval = true;
  std::optional<Grouping> grouping;
  int workers = 1;
};

// Greedy CELF selection with population-normalized gains under a total
// budget and, optionally, per-group budgets. Gains are (f(Z + c) - f(Z)) / n_c;
// ties go to the lower index. With lazy_eval the current best candidate is
// re-evaluated until it stays on top; without it every feasible candidate is
// re-evaluated each round. After each pick, candidates that no longer fit the
// remaining budget (or a group budget) are dropped.
SelectionResult SelectGreedy(const MobilityNetwork& network,
                             const InfluenceFunction& influence,
                             const GreedyOptions& options);

// IM and its fairness/risk variants with simulated influence.
absl::StatusOr<SelectionResult> SelectIm(const MobilityNetwork& network,
                                         const DiseaseParams& params,
                                         const StrategySpec& spec,
                                         uint64_t rng_seed, int workers = 1);

// RAND: CBGs in a seeded random order, skipping any that would overflow B.
SelectionResult SelectRandom(const MobilityNetwork& network, double budget,
                             uint64_t rng_seed);

// CS: CBGs by median age descending (ties by index), skipping any that would
// overflow B.
SelectionResult SelectOldest(const MobilityNetwork& network, double budget);

// B = budget_fraction * N.
double TotalBudget(const MobilityNetwork& network, double budget_fraction);

// Dispatches on spec.kind.
absl::StatusOr<SelectionResult> SelectStrategy(const MobilityNetwork& network,
                                               const DiseaseParams& params,
                                               const StrategySpec& spec,
                                               uint64_t rng_seed,
                                               int workers = 1);

// Consumed persons per group for an arbitrary selection.
std::vector<double> GroupUsage(const MobilityNetwork& network,
                               std::span<const int> selected,
                               Grouping grouping);

}  // namespace fairvax

#endif  // FAIRVAX_IM_SELECTOR_H_
