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

#include "fairvax/im_selector.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fairvax/parallel.h"
#include "fairvax/random.h"
#include "fairvax/status_macros.h"

namespace fairvax {
namespace {

constexpr double kBudgetEpsilon = 1e-9;

struct Candidate {
  int cbg = 0;
  double gain = 0.0;
  // f(Z + cbg) as of round `fresh_round`.
  double value = 0.0;
  size_t fresh_round = 0;
};

bool BetterGain(const Candidate& a, const Candidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  return a.cbg < b.cbg;
}

double Population(const MobilityNetwork& network, int cbg) {
  return static_cast<double>(network.cbg(cbg).population);
}

// Adds CBGs in `order` while they fit the total budget.
SelectionResult FillInOrder(const MobilityNetwork& network,
                            const std::vector<int>& order, double budget) {
  SelectionResult result;
  result.budget = budget;
  for (int c : order) {
    const double n = Population(network, c);
    if (result.budget_used + n <= budget + kBudgetEpsilon) {
      result.selected.push_back(c);
      result.budget_used += n;
    }
  }
  return result;
}

}  // namespace

absl::string_view StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kNone:
      return "none";
    case StrategyKind::kRandom:
      return "rand";
    case StrategyKind::kOldest:
      return "cs";
    case StrategyKind::kIm:
      return "im";
    case StrategyKind::kImRace:
      return "im-r";
    case StrategyKind::kImIncome:
      return "im-i";
    case StrategyKind::kImAge:
      return "im-a";
    case StrategyKind::kImRaceAge:
      return "im-ra";
    case StrategyKind::kImIncomeAge:
      return "im-ia";
  }
  return "unknown";
}

absl::StatusOr<StrategyKind> ParseStrategy(absl::string_view name) {
  for (StrategyKind kind : kAllStrategies) {
    if (StrategyName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown strategy '", name,
      "' (expected none|rand|cs|im|im-r|im-i|im-a|im-ra|im-ia)"));
}

bool IsImStrategy(StrategyKind kind) {
  return kind != StrategyKind::kNone && kind != StrategyKind::kRandom &&
         kind != StrategyKind::kOldest;
}

bool UsesRiskWeights(StrategyKind kind) {
  return kind == StrategyKind::kImAge || kind == StrategyKind::kImRaceAge ||
         kind == StrategyKind::kImIncomeAge;
}

std::optional<Grouping> FairnessGrouping(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kImRace:
    case StrategyKind::kImRaceAge:
      return Grouping::kRace;
    case StrategyKind::kImIncome:
    case StrategyKind::kImIncomeAge:
      return Grouping::kIncome;
    default:
      return std::nullopt;
  }
}

absl::Status StrategySpec::Validate() const {
  if (!(budget_fraction > 0 && budget_fraction <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget_fraction must be in (0, 1], got ", budget_fraction));
  }
  if (sigma_replicates < 1) {
    return absl::InvalidArgumentError("sigma_replicates must be >= 1");
  }
  if (selection_window_hours < 0) {
    return absl::InvalidArgumentError("selection_window_hours must be >= 0");
  }
  return absl::OkStatus();
}

bool GroupBudgets::CanAfford(const MobilityNetwork& network, int cbg,
                             double slack) const {
  const std::vector<double> charge = network.GroupShares(cbg, grouping);
  for (size_t j = 0; j < charge.size(); ++j) {
    if (charge[j] > 0 && consumed[j] + charge[j] > budgets[j] + slack) {
      return false;
    }
  }
  return true;
}

GroupBudgets ComputeGroupBudgets(const MobilityNetwork& network,
                                 Grouping grouping, double budget) {
  GroupBudgets b;
  b.grouping = grouping;
  const double total = static_cast<double>(network.total_population());
  for (double n_j : network.group_populations(grouping)) {
    b.budgets.push_back(n_j / total * budget);
  }
  b.consumed.assign(b.budgets.size(), 0.0);
  return b;
}

absl::Status ChargeSelection(GroupBudgets& budgets,
                             const MobilityNetwork& network, int cbg) {
  if (cbg < 0 || cbg >= network.num_cbgs()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown CBG index ", cbg));
  }
  if (!budgets.CanAfford(network, cbg)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "charging CBG ", network.cbg(cbg).id, " would exceed a ",
        GroupingName(budgets.grouping), " group budget"));
  }
  const std::vector<double> charge = network.GroupShares(cbg, budgets.grouping);
  for (size_t j = 0; j < charge.size(); ++j) budgets.consumed[j] += charge[j];
  return absl::OkStatus();
}

double SimulationInfluence::Evaluate(std::span<const int> seed_set) const {
  return risk_weighted_
             ? simulator_.SigmaA(seed_set, window_hours_, replicates_,
                                 rng_seed_, mode_)
             : simulator_.Sigma(seed_set, window_hours_, replicates_,
                                rng_seed_, mode_);
}

SelectionResult SelectGreedy(const MobilityNetwork& network,
                             const InfluenceFunction& influence,
                             const GreedyOptions& options) {
  SelectionResult result;
  result.budget = options.budget;
  if (options.grouping) {
    result.group_budgets =
        ComputeGroupBudgets(network, *options.grouping, options.budget);
  }
  auto feasible = [&](int c) {
    if (result.budget_used + Population(network, c) >
        options.budget + kBudgetEpsilon) {
      return false;
    }
    return !result.group_budgets ||
           result.group_budgets->CanAfford(network, c);
  };

  // Single-CBG influence of every candidate.
  const int k = network.num_cbgs();
  std::vector<Candidate> candidates(k);
  ParallelFor(options.workers, k, [&](size_t i) {
    const int c = static_cast<int>(i);
    const int seed[] = {c};
    candidates[i].cbg = c;
    candidates[i].value = influence.Evaluate(seed);
    candidates[i].gain = candidates[i].value / Population(network, c);
  });
  result.evaluation_count += k;

  std::vector<int> chosen;
  double spread = 0.0;
  auto evaluate_with = [&](Candidate& cand) {
    std::vector<int> set = chosen;
    set.push_back(cand.cbg);
    cand.value = influence.Evaluate(set);
    cand.gain = (cand.value - spread) / Population(network, cand.cbg);
    cand.fresh_round = chosen.size();
  };

  while (true) {
    std::erase_if(candidates,
                  [&](const Candidate& cand) { return !feasible(cand.cbg); });
    if (candidates.empty()) break;
    const size_t round = chosen.size();

    if (options.lazy_eval) {
      std::sort(candidates.begin(), candidates.end(), BetterGain);
      while (candidates.front().fresh_round != round) {
        evaluate_with(candidates.front());
        ++result.evaluation_count;
        std::sort(candidates.begin(), candidates.end(), BetterGain);
      }
    } else {
      std::vector<size_t> stale;
      for (size_t idx = 0; idx < candidates.size(); ++idx) {
        if (candidates[idx].fresh_round != round) stale.push_back(idx);
      }
      ParallelFor(options.workers, stale.size(),
                  [&](size_t s) { evaluate_with(candidates[stale[s]]); });
      result.evaluation_count += static_cast<int64_t>(stale.size());
      std::sort(candidates.begin(), candidates.end(), BetterGain);
    }

    const Candidate best = candidates.front();
    candidates.erase(candidates.begin());
    result.gain_trace.push_back(
        {best.cbg, best.gain, best.value - spread});
    spread = best.value;
    chosen.push_back(best.cbg);
    result.budget_used += Population(network, best.cbg);
    if (result.group_budgets) {
      const std::vector<double> charge =
          network.GroupShares(best.cbg, result.group_budgets->grouping);
      for (size_t j = 0; j < charge.size(); ++j) {
        result.group_budgets->consumed[j] += charge[j];
      }
    }
  }
  result.selected = std::move(chosen);
  if (result.selected.empty()) {
    result.warnings.push_back(absl::StrCat(
        "budget ", options.budget,
        " admits no CBG; the vaccination set is empty"));
  }
  return result;
}

double TotalBudget(const MobilityNetwork& network, double budget_fraction) {
  return budget_fraction * static_cast<double>(network.total_population());
}

absl::StatusOr<SelectionResult> SelectIm(const MobilityNetwork& network,
                                         const DiseaseParams& params,
                                         const StrategySpec& spec,
                                         uint64_t rng_seed, int workers) {
  RETURN_IF_ERROR(spec.Validate());
  RETURN_IF_ERROR(params.Validate());
  if (!IsImStrategy(spec.kind)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "SelectIm called with non-IM strategy ", StrategyName(spec.kind)));
  }
  const SeirSimulator simulator(network, params);
  const bool risk_weighted = UsesRiskWeights(spec.kind);
  const SimulationInfluence influence(simulator, spec.selection_window_hours,
                                      spec.sigma_replicates, rng_seed,
                                      spec.sigma_mode, risk_weighted);
  GreedyOptions options;
  options.budget = TotalBudget(network, spec.budget_fraction);
  options.lazy_eval = spec.lazy_eval && !risk_weighted;
  options.grouping = FairnessGrouping(spec.kind);
  options.workers = workers;
  SelectionResult result = SelectGreedy(network, influence, options);
  result.strategy = spec.kind;
  return result;
}

SelectionResult SelectRandom(const MobilityNetwork& network, double budget,
                             uint64_t rng_seed) {
  std::vector<int> order(network.num_cbgs());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(MixSeed(rng_seed));
  std::shuffle(order.begin(), order.end(), rng);
  SelectionResult result = FillInOrder(network, order, budget);
  result.strategy = StrategyKind::kRandom;
  return result;
}

SelectionResult SelectOldest(const MobilityNetwork& network, double budget) {
  std::vector<int> order(network.num_cbgs());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return network.cbg(a).median_age > network.cbg(b).median_age;
  });
  SelectionResult result = FillInOrder(network, order, budget);
  result.strategy = StrategyKind::kOldest;
  return result;
}

absl::StatusOr<SelectionResult> SelectStrategy(const MobilityNetwork& network,
                                               const DiseaseParams& params,
                                               const StrategySpec& spec,
                                               uint64_t rng_seed,
                                               int workers) {
  RETURN_IF_ERROR(spec.Validate());
  const double budget = TotalBudget(network, spec.budget_fraction);
  switch (spec.kind) {
    case StrategyKind::kNone: {
      SelectionResult none;
      none.strategy = StrategyKind::kNone;
      none.budget = budget;
      return none;
    }
    case StrategyKind::kRandom:
      return SelectRandom(network, budget, rng_seed);
    case StrategyKind::kOldest:
      return SelectOldest(network, budget);
    default:
      return SelectIm(network, params, spec, rng_seed, workers);
  }
}

std::vector<double> GroupUsage(const MobilityNetwork& network,
                               std::span<const int> selected,
                               Grouping grouping) {
  std::vector<double> used(network.num_groups(grouping), 0.0);
  for (int c : selected) {
    const std::vector<double> shares = network.GroupShares(c, grouping);
    for (size_t j = 0; j < shares.size(); ++j) used[j] += shares[j];
  }
  return used;
}

}  // namespace fairvax
