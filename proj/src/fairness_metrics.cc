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

#include "fairvax/fairness_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "fairvax/status_macros.h"

namespace fairvax {
namespace {

absl::StatusOr<GroupDistribution> Normalize(Grouping grouping,
                                            std::vector<double> mass,
                                            const char* what) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (!(total > 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " distribution is undefined: total is zero"));
  }
  for (double& m : mass) m /= total;
  return GroupDistribution{grouping, std::move(mass)};
}

}  // namespace

absl::StatusOr<double> KlDivergence(const GroupDistribution& p,
                                    const GroupDistribution& q,
                                    std::vector<std::string>* warnings) {
  if (p.grouping != q.grouping || p.values.size() != q.values.size()) {
    return absl::InvalidArgumentError(
        "KL divergence needs distributions over the same groups");
  }
  double kl = 0.0;
  for (size_t j = 0; j < p.values.size(); ++j) {
    const double pj = p.values[j];
    const double qj = q.values[j];
    if (pj < 0 || qj < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative probability in group ", j + 1));
    }
    if (qj == 0) {
      if (pj > 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "KL divergence undefined: p(", j + 1, ") = ", pj,
            " but q(", j + 1, ") = 0"));
      }
      if (warnings) {
        warnings->push_back(absl::StrCat(
            "group ", j + 1, " has zero reference mass; excluded from support"));
      }
      continue;
    }
    if (pj > 0) kl += pj * std::log(pj / qj);
  }
  // Rounding can leave a tiny negative value for p == q.
  return std::max(kl, 0.0);
}

GroupDistribution ReferenceDistribution(const MobilityNetwork& network,
                                        Grouping grouping) {
  GroupDistribution q{grouping, network.group_populations(grouping)};
  const double n = static_cast<double>(network.total_population());
  for (double& v : q.values) v /= n;
  return q;
}

absl::StatusOr<GroupDistribution> TreatmentDistribution(
    const MobilityNetwork& network, std::span<const int> selected,
    Grouping grouping) {
  if (selected.empty()) {
    return absl::InvalidArgumentError(
        "treatment distribution is undefined for an empty selection");
  }
  std::vector<double> mass(network.num_groups(grouping), 0.0);
  for (int c : selected) {
    if (c < 0 || c >= network.num_cbgs()) {
      return absl::InvalidArgumentError(absl::StrCat("unknown CBG index ", c));
    }
    const std::vector<double> shares = network.GroupShares(c, grouping);
    for (size_t j = 0; j < shares.size(); ++j) mass[j] += shares[j];
  }
  return Normalize(grouping, std::move(mass), "treatment");
}

absl::StatusOr<GroupDistribution> OutcomeDistribution(
    const SimulationResult& result, const MobilityNetwork& network,
    Grouping grouping) {
  if (!(result.eir_total > 0)) {
    return absl::InvalidArgumentError(
        "outcome distribution is undefined without infections");
  }
  std::vector<double> mass(network.num_groups(grouping), 0.0);
  const SeirState& st = result.final_state;
  for (int c = 0; c < st.num_cbgs(); ++c) {
    const double eir = st.Eir(c);
    const Cbg& cbg = network.cbg(c);
    if (grouping == Grouping::kRace) {
      for (size_t j = 0; j < mass.size(); ++j) {
        mass[j] += eir * cbg.racial_fractions[j];
      }
    } else {
      mass[cbg.income_group - 1] += eir;
    }
  }
  return Normalize(grouping, std::move(mass), "outcome");
}

absl::StatusOr<double> PctDecrease(double baseline_eir, double strategy_eir) {
  if (!(baseline_eir > 0)) {
    return absl::InvalidArgumentError(
        "percentage decrease needs a positive baseline");
  }
  return 100.0 * (baseline_eir - strategy_eir) / baseline_eir;
}

double RiskWeightedEir(const SimulationResult& result,
                       const MobilityNetwork& network) {
  const SeirState& st = result.final_state;
  double total = 0.0;
  for (int c = 0; c < st.num_cbgs(); ++c) {
    total += network.cbg(c).risk_weight * st.Eir(c);
  }
  return total;
}

absl::StatusOr<std::vector<double>> MobilityReduction(
    const MobilityNetwork& pre, const MobilityNetwork& post,
    Grouping grouping) {
  if (pre.num_cbgs() != post.num_cbgs() || pre.num_pois() != post.num_pois() ||
      pre.num_groups(grouping) != post.num_groups(grouping)) {
    return absl::InvalidArgumentError(
        "mobility reduction needs networks with the same node sets");
  }
  auto group_mobility = [grouping](const MobilityNetwork& net) {
    std::vector<double> per_cbg(net.num_cbgs(), 0.0);
    for (int t = 0; t < net.visits().horizon(); ++t) {
      for (const Visit& v : net.visits().AtHour(t)) per_cbg[v.cbg] += v.weight;
    }
    std::vector<double> mass(net.num_groups(grouping), 0.0);
    for (int c = 0; c < net.num_cbgs(); ++c) {
      const Cbg& cbg = net.cbg(c);
      if (grouping == Grouping::kRace) {
        for (size_t j = 0; j < mass.size(); ++j) {
          mass[j] += per_cbg[c] * cbg.racial_fractions[j];
        }
      } else {
        mass[cbg.income_group - 1] += per_cbg[c];
      }
    }
    return mass;
  };
  const std::vector<double> before = group_mobility(pre);
  const std::vector<double> after = group_mobility(post);
  std::vector<double> reduction(before.size());
  for (size_t j = 0; j < before.size(); ++j) {
    if (!(before[j] > 0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          GroupingName(grouping), " group ", pre.labels(grouping)[j],
          " has no mobility before the change"));
    }
    reduction[j] = 1.0 - after[j] / before[j];
  }
  return reduction;
}

FairnessReport EvaluateFairness(const MobilityNetwork& network,
                                std::span<const int> selected,
                                const SimulationResult& result) {
  FairnessReport report;
  report.reference_race = ReferenceDistribution(network, Grouping::kRace);
  report.reference_income = ReferenceDistribution(network, Grouping::kIncome);
  auto fill = [&](Grouping g, const GroupDistribution& q,
                  std::optional<GroupDistribution>& treatment,
                  std::optional<double>& treatment_kl,
                  std::optional<GroupDistribution>& outcome,
                  std::optional<double>& outcome_kl) {
    if (auto p = TreatmentDistribution(network, selected, g); p.ok()) {
      treatment = *p;
      if (auto kl = KlDivergence(*p, q); kl.ok()) treatment_kl = *kl;
    }
    if (auto p = OutcomeDistribution(result, network, g); p.ok()) {
      outcome = *p;
      if (auto kl = KlDivergence(*p, q); kl.ok()) outcome_kl = *kl;
    }
  };
  fill(Grouping::kRace, report.reference_race, report.treatment_race,
       report.treatment_kl_race, report.outcome_race, report.outcome_kl_race);
  fill(Grouping::kIncome, report.reference_income, report.treatment_income,
       report.treatment_kl_income, report.outcome_income,
       report.outcome_kl_income);
  return report;
}

}  // namespace fairvax
