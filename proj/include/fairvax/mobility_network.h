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

#ifndef FAIRVAX_MOBILITY_NETWORK_H_
#define FAIRVAX_MOBILITY_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fairvax {

inline constexpr double kFractionSumTolerance = 1e-9;
inline constexpr int kNumIncomeGroups = 4;

enum class Grouping { kRace, kIncome };

absl::string_view GroupingName(Grouping grouping);

// A census block group: the community-level node of the mobility network.
struct Cbg {
  int64_t id = 0;
  int64_t population = 0;
  // Fraction of residents in each racial group; sums to 1.
  std::vector<double> racial_fractions;
  double median_income = 0.0;
  // Median-income quartile, 1..4. Zero until AssignIncomeGroups runs.
  int income_group = 0;
  double median_age = 0.0;
  // Age-associated death-rate multiplier relative to 18-29 year olds.
  double risk_weight = 1.0;
};

struct Poi {
  int64_t id = 0;
  double area_sqft = 0.0;
  // Median fraction of an hour a visitor spends at the POI, in (0, 1].
  double dwell_fraction = 0.0;
};

// One nonzero entry of the hourly visit matrix, addressed by node index.
struct Visit {
  int cbg = 0;
  int poi = 0;
  double weight = 0.0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

struct VisitTriplet {
  int hour = 0;
  int cbg = 0;
  int poi = 0;
  double weight = 0.0;
};

// Sparse temporal visit matrix stored as one contiguous block per hour.
class VisitMatrix {
 public:
  VisitMatrix() : offsets_{0} {}

  // Groups triplets by hour. Within an hour the input order is kept.
  // `horizon` is raised to cover the largest hour present.
  static VisitMatrix FromTriplets(int horizon,
                                  std::vector<VisitTriplet> triplets);

  int horizon() const { return static_cast<int>(offsets_.size()) - 1; }
  size_t num_entries() const { return visits_.size(); }

  // Visits during `hour`; empty outside [0, horizon).
  std::span<const Visit> AtHour(int hour) const {
    if (hour < 0 || hour >= horizon()) return {};
    return std::span<const Visit>(visits_.data() + offsets_[hour],
                                  offsets_[hour + 1] - offsets_[hour]);
  }

  bool operator==(const VisitMatrix&) const = default;

 private:
  std::vector<size_t> offsets_;
  std::vector<Visit> visits_;
};

// Age bracket lower bounds and multipliers; a median age falls into the last
// bracket whose lower bound it reaches. Ages below the first bound get 1.0.
struct RiskTable {
  std::vector<double> lower_bounds;
  std::vector<double> multipliers;

  // CDC death-rate multipliers relative to 18-29 year olds.
  static RiskTable CdcDeath();
  double Lookup(double median_age) const;
};

// Labels each CBG with the quartile (1..4) of the unweighted CBG median-income
// distribution. Boundaries are the linearly interpolated 25/50/75th
// percentiles; incomes equal to a boundary go to the lower quartile.
void AssignIncomeGroups(std::span<Cbg> cbgs);

void AssignRiskWeights(std::span<Cbg> cbgs, const RiskTable& table);

// Checks the per-node invariants. The message names the offending field.
absl::Status ValidateCbg(const Cbg& cbg, size_t num_race_groups);
absl::Status ValidatePoi(const Poi& poi);

// Temporal bipartite CBG/POI network. Immutable once built; safe to share
// across threads.
class MobilityNetwork {
 public:
  // Validates every node and visit, assigns income groups and risk weights,
  // and caches the group population totals.
  static absl::StatusOr<MobilityNetwork> Create(
      std::vector<Cbg> cbgs, std::vector<Poi> pois, VisitMatrix visits,
      std::vector<std::string> race_labels,
      const RiskTable& risk_table = RiskTable::CdcDeath());

  const std::vector<Cbg>& cbgs() const { return cbgs_; }
  const std::vector<Poi>& pois() const { return pois_; }
  const VisitMatrix& visits() const { return visits_; }
  const Cbg& cbg(int index) const { return cbgs_[index]; }

  int num_cbgs() const { return static_cast<int>(cbgs_.size()); }
  int num_pois() const { return static_cast<int>(pois_.size()); }
  size_t num_race_groups() const { return race_labels_.size(); }
  size_t num_groups(Grouping grouping) const;

  const std::vector<std::string>& race_labels() const { return race_labels_; }
  const std::vector<std::string>& income_labels() const {
    return income_labels_;
  }
  const std::vector<std::string>& labels(Grouping grouping) const;

  // N = sum of CBG populations.
  int64_t total_population() const { return total_population_; }
  // N_j for each group of the grouping.
  const std::vector<double>& group_populations(Grouping grouping) const;

  // Persons of CBG `index` that belong to each group (n * alpha for race,
  // the whole population in one slot for income).
  std::vector<double> GroupShares(int index, Grouping grouping) const;

  std::optional<int> IndexOfCbg(int64_t id) const;
  std::optional<int> IndexOfPoi(int64_t id) const;

 private:
  MobilityNetwork() = default;

  std::vector<Cbg> cbgs_;
  std::vector<Poi> pois_;
  VisitMatrix visits_;
  std::vector<std::string> race_labels_;
  std::vector<std::string> income_labels_;
  int64_t total_population_ = 0;
  std::vector<double> race_populations_;
  std::vector<double> income_populations_;
  std::unordered_map<int64_t, int> cbg_index_;
  std::unordered_map<int64_t, int> poi_index_;
};

}  // namespace fairvax

#endif  // FAIRVAX_MOBILITY_NETWORK_H_
