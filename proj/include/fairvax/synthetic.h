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

#ifndef FAIRVAX_SYNTHETIC_H_
#define FAIRVAX_SYNTHETIC_H_

#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairvax/config.h"
#include "fairvax/mobility_network.h"

namespace fairvax {

enum class RaceMixing {
  // Racial composition independent of income.
  kMixed,
  // Share of race group 1 rises with the income quartile.
  kSegregated,
};

// Knobs of the synthetic network generator. Config keys match the field
// names; `mixing` takes "mixed" or "segregated".
struct SyntheticSpec {
  int num_cbgs = 200;
  int num_pois = 500;
  int num_race_groups = 4;
  int horizon_hours = 840;
  // Average hourly visitors per CBG over the whole horizon.
  double mean_visits_per_hour = 10.0;
  // Distinct POIs each CBG visits.
  int pois_per_cbg = 6;
  int64_t min_population = 600;
  int64_t max_population = 3000;

  RaceMixing mixing = RaceMixing::kSegregated;
  // Increase of the race-group-1 share per income quartile (segregated mode).
  double segregation = 0.2;

  double median_income = 60000.0;
  // Log-scale standard deviation of CBG median income.
  double income_dispersion = 0.5;

  double mean_age = 38.0;
  double age_sd = 8.0;
  // Years of median age gained per income quartile.
  double age_income_slope = 2.0;

  // Log-scale standard deviation of per-CBG mobility.
  double mobility_dispersion = 0.8;
  // Relative extra mobility of income quartile 1 over quartile 4.
  double income_mobility_gradient = 0.5;
  // Log-mobility drop per decade of median age above mean_age.
  double age_mobility_decay = 0.3;

  // Pareto tail index of POI popularity; smaller means heavier hubs.
  double poi_popularity_exponent = 1.2;
  double mean_poi_area_sqft = 10000.0;
  double poi_area_dispersion = 0.7;
  double min_dwell_fraction = 0.1;
  double max_dwell_fraction = 0.6;

  absl::Status Validate() const;
};

absl::StatusOr<SyntheticSpec> ParseSyntheticSpec(const KeyValueConfig& config);

// Pure function of (spec, seed).
absl::StatusOr<MobilityNetwork> GenerateSynthetic(const SyntheticSpec& spec,
                                                  uint64_t seed);

}  // namespace fairvax

#endif  // FAIRVAX_SYNTHETIC_H_
