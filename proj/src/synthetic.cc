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

#include "fairvax/synthetic.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "fairvax/random.h"
#include "fairvax/status_macros.h"

namespace fairvax {
namespace {

// Relative visit intensity for an hour; averages to 1 over a week.
std::vector<double> WeeklyProfile() {
  std::vector<double> profile(24 * 7, 0.0);
  for (int h = 0; h < 24 * 7; ++h) {
    const int hour_of_day = h % 24;
    const int day = h / 24;
    double v = 0.0;
    if (hour_of_day >= 6 && hour_of_day <= 22) {
      v = std::sin(std::numbers::pi * (hour_of_day - 6 + 0.5) / 17.0);
    }
    if (day >= 5) v *= 0.8;
    profile[h] = v;
  }
  const double mean =
      std::accumulate(profile.begin(), profile.end(), 0.0) / profile.size();
  for (double& v : profile) v /= mean;
  return profile;
}

}  // namespace

absl::Status SyntheticSpec::Validate() const {
  if (num_cbgs <= 0 || num_pois <= 0 || num_race_groups <= 0 ||
      horizon_hours <= 0 || pois_per_cbg <= 0) {
    return absl::InvalidArgumentError(
        "num_cbgs, num_pois, num_race_groups, horizon_hours and pois_per_cbg "
        "must be positive");
  }
  if (min_population < 1 || max_population < min_population) {
    return absl::InvalidArgumentError(
        "population range must satisfy 1 <= min_population <= max_population");
  }
  if (!(mean_visits_per_hour >= 0)) {
    return absl::InvalidArgumentError("mean_visits_per_hour must be >= 0");
  }
  if (!(median_income > 0) || !(mean_poi_area_sqft > 0) ||
      !(poi_popularity_exponent > 0)) {
    return absl::InvalidArgumentError(
        "median_income, mean_poi_area_sqft and poi_popularity_exponent must "
        "be positive");
  }
  if (!(min_dwell_fraction > 0) || max_dwell_fraction > 1 ||
      max_dwell_fraction < min_dwell_fraction) {
    return absl::InvalidArgumentError(
        "dwell fractions must satisfy 0 < min <= max <= 1");
  }
  if (income_dispersion < 0 || age_sd < 0 || mobility_dispersion < 0 ||
      poi_area_dispersion < 0) {
    return absl::InvalidArgumentError("dispersions must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<SyntheticSpec> ParseSyntheticSpec(const KeyValueConfig& config) {
  RETURN_IF_ERROR(config.CheckKnownKeys(
      {"num_cbgs", "num_pois", "num_race_groups", "horizon_hours",
       "mean_visits_per_hour", "pois_per_cbg", "min_population",
       "max_population", "mixing", "segregation", "median_income",
       "income_dispersion", "mean_age", "age_sd", "age_income_slope",
       "mobility_dispersion", "income_mobility_gradient", "age_mobility_decay",
       "poi_popularity_exponent", "mean_poi_area_sqft", "poi_area_dispersion",
       "min_dwell_fraction", "max_dwell_fraction"}));
  SyntheticSpec s;
  auto get_int = [&](const char* key, int* out) -> absl::Status {
    ASSIGN_OR_RETURN(int64_t v, config.GetInt(key, *out));
    *out = static_cast<int>(v);
    return absl::OkStatus();
  };
  auto get_double = [&](const char* key, double* out) -> absl::Status {
    ASSIGN_OR_RETURN(*out, config.GetDouble(key, *out));
    return absl::OkStatus();
  };
  RETURN_IF_ERROR(get_int("num_cbgs", &s.num_cbgs));
  RETURN_IF_ERROR(get_int("num_pois", &s.num_pois));
  RETURN_IF_ERROR(get_int("num_race_groups", &s.num_race_groups));
  RETURN_IF_ERROR(get_int("horizon_hours", &s.horizon_hours));
  RETURN_IF_ERROR(get_int("pois_per_cbg", &s.pois_per_cbg));
  ASSIGN_OR_RETURN(s.min_population,
                   config.GetInt("min_population", s.min_population));
  ASSIGN_OR_RETURN(s.max_population,
                   config.GetInt("max_population", s.max_population));
  RETURN_IF_ERROR(get_double("mean_visits_per_hour", &s.mean_visits_per_hour));
  RETURN_IF_ERROR(get_double("segregation", &s.segregation));
  RETURN_IF_ERROR(get_double("median_income", &s.median_income));
  RETURN_IF_ERROR(get_double("income_dispersion", &s.income_dispersion));
  RETURN_IF_ERROR(get_double("mean_age", &s.mean_age));
  RETURN_IF_ERROR(get_double("age_sd", &s.age_sd));
  RETURN_IF_ERROR(get_double("age_income_slope", &s.age_income_slope));
  RETURN_IF_ERROR(get_double("mobility_dispersion", &s.mobility_dispersion));
  RETURN_IF_ERROR(
      get_double("income_mobility_gradient", &s.income_mobility_gradient));
  RETURN_IF_ERROR(get_double("age_mobility_decay", &s.age_mobility_decay));
  RETURN_IF_ERROR(
      get_double("poi_popularity_exponent", &s.poi_popularity_exponent));
  RETURN_IF_ERROR(get_double("mean_poi_area_sqft", &s.mean_poi_area_sqft));
  RETURN_IF_ERROR(get_double("poi_area_dispersion", &s.poi_area_dispersion));
  RETURN_IF_ERROR(get_double("min_dwell_fraction", &s.min_dwell_fraction));
  RETURN_IF_ERROR(get_double("max_dwell_fraction", &s.max_dwell_fraction));
  const std::string mixing = config.GetString("mixing", "segregated");
  if (mixing == "segregated") {
    s.mixing = RaceMixing::kSegregated;
  } else if (mixing == "mixed") {
    s.mixing = RaceMixing::kMixed;
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "config key mixing: expected 'mixed' or 'segregated', got '", mixing,
        "'"));
  }
  RETURN_IF_ERROR(s.Validate());
  return s;
}

absl::StatusOr<MobilityNetwork> GenerateSynthetic(const SyntheticSpec& spec,
                                                  uint64_t seed) {
  RETURN_IF_ERROR(spec.Validate());
  Rng rng(DeriveSeed(seed, 0x5eed));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::gamma_distribution<double> gamma(1.0, 1.0);

  const int k = spec.num_cbgs;
  std::vector<Cbg> cbgs(k);
  std::uniform_int_distribution<int64_t> population(spec.min_population,
                                                    spec.max_population);
  for (int i = 0; i < k; ++i) {
    cbgs[i].id = i + 1;
    cbgs[i].population = population(rng);
    cbgs[i].median_income =
        std::round(spec.median_income *
                   std::exp(spec.income_dispersion * normal(rng)));
  }
  AssignIncomeGroups(cbgs);

  const int m = spec.num_race_groups;
  for (Cbg& c : cbgs) {
    const double quartile_offset = c.income_group - 2.5;
    c.racial_fractions.assign(m, 0.0);
    if (m == 1) {
      c.racial_fractions[0] = 1.0;
    } else {
      double lead = spec.mixing == RaceMixing::kSegregated
                        ? 0.5 + spec.segregation * quartile_offset +
                              0.07 * normal(rng)
                        : 0.5 + 0.15 * normal(rng);
      lead = std::clamp(lead, 0.02, 0.97);
      double rest_total = 0.0;
      for (int j = 1; j < m; ++j) {
        c.racial_fractions[j] = gamma(rng);
        rest_total += c.racial_fractions[j];
      }
      c.racial_fractions[0] = lead;
      for (int j = 1; j < m; ++j) {
        c.racial_fractions[j] *= (1.0 - lead) / rest_total;
      }
      const double sum = std::accumulate(c.racial_fractions.begin(),
                                         c.racial_fractions.end(), 0.0);
      for (double& a : c.racial_fractions) a /= sum;
    }
    c.median_age = std::clamp(spec.mean_age +
                                  spec.age_income_slope * quartile_offset +
                                  spec.age_sd * normal(rng),
                              18.0, 95.0);
    c.median_age = std::round(c.median_age * 10.0) / 10.0;
  }

  // Per-CBG hourly visitor rate, proportional to population and shaped by
  // income and age.
  std::vector<double> mobility(k);
  double mean_population = 0.0;
  for (const Cbg& c : cbgs) mean_population += c.population;
  mean_population /= k;
  double mobility_sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const Cbg& c = cbgs[i];
    const double noise = std::exp(spec.mobility_dispersion * normal(rng));
    const double income_factor =
        1.0 + spec.income_mobility_gradient * (kNumIncomeGroups - c.income_group) /
                  (kNumIncomeGroups - 1.0);
    const double age_factor =
        std::exp(-spec.age_mobility_decay * (c.median_age - spec.mean_age) / 10.0);
    mobility[i] = noise * income_factor * age_factor;
    mobility_sum += mobility[i];
  }
  for (int i = 0; i < k; ++i) {
    mobility[i] *= k / mobility_sum * spec.mean_visits_per_hour *
                   cbgs[i].population / mean_population;
  }

  std::vector<Poi> pois(spec.num_pois);
  std::vector<double> popularity(spec.num_pois);
  const double area_sigma = spec.poi_area_dispersion;
  for (int p = 0; p < spec.num_pois; ++p) {
    pois[p].id = p + 1;
    pois[p].area_sqft = std::round(
        spec.mean_poi_area_sqft *
        std::exp(area_sigma * normal(rng) - 0.5 * area_sigma * area_sigma));
    pois[p].area_sqft = std::max(pois[p].area_sqft, 50.0);
    pois[p].dwell_fraction =
        spec.min_dwell_fraction +
        (spec.max_dwell_fraction - spec.min_dwell_fraction) * uniform(rng);
    popularity[p] =
        std::pow(1.0 - uniform(rng), -1.0 / spec.poi_popularity_exponent);
  }

  // Each CBG draws distinct POIs proportionally to popularity, with a random
  // split of its visitors among them.
  const int fanout = std::min(spec.pois_per_cbg, spec.num_pois);
  std::vector<std::vector<std::pair<int, double>>> catchment(k);
  for (int i = 0; i < k; ++i) {
    std::vector<double> weights = popularity;
    double share_sum = 0.0;
    for (int f = 0; f < fanout; ++f) {
      std::discrete_distribution<int> pick(weights.begin(), weights.end());
      const int p = pick(rng);
      weights[p] = 0.0;
      const double share = gamma(rng);
      catchment[i].emplace_back(p, share);
      share_sum += share;
    }
    std::sort(catchment[i].begin(), catchment[i].end());
    for (auto& entry : catchment[i]) entry.second /= share_sum;
  }

  const std::vector<double> profile = WeeklyProfile();
  std::vector<VisitTriplet> triplets;
  for (int t = 0; t < spec.horizon_hours; ++t) {
    const double intensity = profile[t % profile.size()];
    if (intensity <= 0.0) continue;
    for (int i = 0; i < k; ++i) {
      for (const auto& [p, share] : catchment[i]) {
        const double mean = mobility[i] * intensity * share;
        if (mean <= 0.0) continue;
        std::poisson_distribution<int64_t> visitors(mean);
        const int64_t w = visitors(rng);
        if (w > 0) triplets.push_back({t, i, p, static_cast<double>(w)});
      }
    }
  }

  std::vector<std::string> labels;
  for (int j = 1; j <= m; ++j) labels.push_back(std::to_string(j));
  return MobilityNetwork::Create(
      std::move(cbgs), std::move(pois),
      VisitMatrix::FromTriplets(spec.horizon_hours, std::move(triplets)),
      std::move(labels));
}

}  // namespace fairvax
