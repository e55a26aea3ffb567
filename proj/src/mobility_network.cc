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

#include "fairvax/mobility_network.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "absl/strings/str_cat.h"

namespace fairvax {

absl::string_view GroupingName(Grouping grouping) {
  return grouping == Grouping::kRace ? "race" : "income";
}

VisitMatrix VisitMatrix::FromTriplets(int horizon,
                                      std::vector<VisitTriplet> triplets) {
  for (const VisitTriplet& t : triplets) horizon = std::max(horizon, t.hour + 1);
  horizon = std::max(horizon, 0);
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const VisitTriplet& a, const VisitTriplet& b) {
                     return a.hour < b.hour;
                   });
  VisitMatrix m;
  m.offsets_.assign(horizon + 1, 0);
  m.visits_.reserve(triplets.size());
  for (const VisitTriplet& t : triplets) {
    ++m.offsets_[t.hour + 1];
    m.visits_.push_back({t.cbg, t.poi, t.weight});
  }
  std::partial_sum(m.offsets_.begin(), m.offsets_.end(), m.offsets_.begin());
  return m;
}

RiskTable RiskTable::CdcDeath() {
  return RiskTable{{30, 40, 50, 65, 75, 85}, {3.5, 10, 25, 60, 140, 350}};
}

double RiskTable::Lookup(double median_age) const {
  double weight = 1.0;
  for (size_t b = 0; b < lower_bounds.size(); ++b) {
    if (median_age >= lower_bounds[b]) weight = multipliers[b];
  }
  return weight;
}

namespace {

// Linear interpolation between closest ranks on a sorted sample.
double Percentile(const std::vector<double>& sorted, double fraction) {
  const double pos = fraction * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void AssignIncomeGroups(std::span<Cbg> cbgs) {
  if (cbgs.empty()) return;
  std::vector<double> incomes;
  incomes.reserve(cbgs.size());
  for (const Cbg& c : cbgs) incomes.push_back(c.median_income);
  std::sort(incomes.begin(), incomes.end());
  const double bounds[] = {Percentile(incomes, 0.25), Percentile(incomes, 0.5),
                           Percentile(incomes, 0.75)};
  for (Cbg& c : cbgs) {
    int group = 1;
    for (double b : bounds) {
      if (c.median_income > b) ++group;
    }
    c.income_group = group;
  }
}

void AssignRiskWeights(std::span<Cbg> cbgs, const RiskTable& table) {
  for (Cbg& c : cbgs) c.risk_weight = table.Lookup(c.median_age);
}

absl::Status ValidateCbg(const Cbg& cbg, size_t num_race_groups) {
  if (cbg.population < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("population: must be >= 1, got ", cbg.population));
  }
  if (!std::isfinite(cbg.median_age) || cbg.median_age < 0 ||
      cbg.median_age > 120) {
    return absl::InvalidArgumentError(
        absl::StrCat("median_age: must be in [0, 120], got ", cbg.median_age));
  }
  if (!std::isfinite(cbg.median_income)) {
    return absl::InvalidArgumentError("median_income: not a finite number");
  }
  if (cbg.racial_fractions.size() != num_race_groups) {
    return absl::InvalidArgumentError(
        absl::StrCat("race_frac: expected ", num_race_groups, " values, got ",
                     cbg.racial_fractions.size()));
  }
  double sum = 0.0;
  for (size_t j = 0; j < cbg.racial_fractions.size(); ++j) {
    const double a = cbg.racial_fractions[j];
    if (!std::isfinite(a) || a < 0 || a > 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "race_frac_", j + 1, ": must be in [0, 1], got ", a));
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > kFractionSumTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("race_frac: fractions sum to ", sum, ", expected 1"));
  }
  return absl::OkStatus();
}

absl::Status ValidatePoi(const Poi& poi) {
  if (!std::isfinite(poi.area_sqft) || poi.area_sqft <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("area_sqft: must be > 0, got ", poi.area_sqft));
  }
  if (!std::isfinite(poi.dwell_fraction) || poi.dwell_fraction <= 0 ||
      poi.dwell_fraction > 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dwell_fraction: must be in (0, 1], got ", poi.dwell_fraction));
  }
  return absl::OkStatus();
}

absl::StatusOr<MobilityNetwork> MobilityNetwork::Create(
    std::vector<Cbg> cbgs, std::vector<Poi> pois, VisitMatrix visits,
    std::vector<std::string> race_labels, const RiskTable& risk_table) {
  if (race_labels.empty()) {
    return absl::InvalidArgumentError("network needs at least one race group");
  }
  if (cbgs.empty()) {
    return absl::InvalidArgumentError("network needs at least one CBG");
  }
  MobilityNetwork net;
  for (size_t i = 0; i < cbgs.size(); ++i) {
    if (absl::Status s = ValidateCbg(cbgs[i], race_labels.size()); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CBG ", cbgs[i].id, ": ", s.message()));
    }
    if (!net.cbg_index_.emplace(cbgs[i].id, static_cast<int>(i)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("CBG ", cbgs[i].id, ": duplicate id"));
    }
  }
  for (size_t p = 0; p < pois.size(); ++p) {
    if (absl::Status s = ValidatePoi(pois[p]); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("POI ", pois[p].id, ": ", s.message()));
    }
    if (!net.poi_index_.emplace(pois[p].id, static_cast<int>(p)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("POI ", pois[p].id, ": duplicate id"));
    }
  }
  for (int t = 0; t < visits.horizon(); ++t) {
    for (const Visit& v : visits.AtHour(t)) {
      if (v.cbg < 0 || v.cbg >= static_cast<int>(cbgs.size()) || v.poi < 0 ||
          v.poi >= static_cast<int>(pois.size())) {
        return absl::InvalidArgumentError(absl::StrCat(
            "visit at hour ", t, " references node (", v.cbg, ", ", v.poi,
            ") outside the network"));
      }
      if (!std::isfinite(v.weight) || v.weight < 0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "visit at hour ", t, ": weight must be finite and >= 0, got ",
            v.weight));
      }
    }
  }

  AssignIncomeGroups(cbgs);
  AssignRiskWeights(cbgs, risk_table);

  net.race_populations_.assign(race_labels.size(), 0.0);
  net.income_populations_.assign(kNumIncomeGroups, 0.0);
  for (const Cbg& c : cbgs) {
    net.total_population_ += c.population;
    for (size_t j = 0; j < race_labels.size(); ++j) {
      net.race_populations_[j] +=
          c.racial_fractions[j] * static_cast<double>(c.population);
    }
    net.income_populations_[c.income_group - 1] +=
        static_cast<double>(c.population);
  }
  for (int g = 1; g <= kNumIncomeGroups; ++g) {
    net.income_labels_.push_back(absl::StrCat("Q", g));
  }
  net.cbgs_ = std::move(cbgs);
  net.pois_ = std::move(pois);
  net.visits_ = std::move(visits);
  net.race_labels_ = std::move(race_labels);
  return net;
}

size_t MobilityNetwork::num_groups(Grouping grouping) const {
  return group_populations(grouping).size();
}

const std::vector<std::string>& MobilityNetwork::labels(
    Grouping grouping) const {
  return grouping == Grouping::kRace ? race_labels_ : income_labels_;
}

const std::vector<double>& MobilityNetwork::group_populations(
    Grouping grouping) const {
  return grouping == Grouping::kRace ? race_populations_ : income_populations_;
}

std::vector<double> MobilityNetwork::GroupShares(int index,
                                                 Grouping grouping) const {
  const Cbg& c = cbgs_[index];
  const double n = static_cast<double>(c.population);
  if (grouping == Grouping::kRace) {
    std::vector<double> shares(c.racial_fractions);
    for (double& s : shares) s *= n;
    return shares;
  }
  std::vector<double> shares(kNumIncomeGroups, 0.0);
  shares[c.income_group - 1] = n;
  return shares;
}

std::optional<int> MobilityNetwork::IndexOfCbg(int64_t id) const {
  auto it = cbg_index_.find(id);
  if (it == cbg_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> MobilityNetwork::IndexOfPoi(int64_t id) const {
  auto it = poi_index_.find(id);
  if (it == poi_index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace fairvax
