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

#include "fairvax/disease_model.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "fairvax/status_macros.h"

namespace fairvax {

absl::Status DiseaseParams::Validate() const {
  if (!(beta_home >= 0) || !(psi >= 0)) {
    return absl::InvalidArgumentError("beta_home and psi must be >= 0");
  }
  if (!(p0 > 0 && p0 <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("p0 must be in (0, 1], got ", p0));
  }
  if (!(delta_e_hours >= 1) || !(delta_i_hours >= 1)) {
    return absl::InvalidArgumentError(
        "delta_e_hours and delta_i_hours must be >= 1");
  }
  return absl::OkStatus();
}

absl::StatusOr<DiseaseParams> ParseDiseaseParams(const KeyValueConfig& config) {
  DiseaseParams p;
  ASSIGN_OR_RETURN(p.beta_home, config.GetDouble("beta_home", p.beta_home));
  ASSIGN_OR_RETURN(p.psi, config.GetDouble("psi", p.psi));
  ASSIGN_OR_RETURN(p.p0, config.GetDouble("p0", p.p0));
  ASSIGN_OR_RETURN(p.delta_e_hours,
                   config.GetDouble("delta_e_hours", p.delta_e_hours));
  ASSIGN_OR_RETURN(p.delta_i_hours,
                   config.GetDouble("delta_i_hours", p.delta_i_hours));
  RETURN_IF_ERROR(p.Validate());
  return p;
}

std::vector<double> SeirState::Fractions(const std::vector<double>& compartment,
                                         const MobilityNetwork& network) const {
  std::vector<double> out(compartment.size());
  for (size_t c = 0; c < compartment.size(); ++c) {
    out[c] = compartment[c] / static_cast<double>(network.cbg(c).population);
  }
  return out;
}

SeirTotals Totals(const SeirState& state) {
  SeirTotals t;
  for (int c = 0; c < state.num_cbgs(); ++c) {
    t.s += state.s[c];
    t.e += state.e[c];
    t.i += state.i[c];
    t.r += state.r[c];
  }
  return t;
}

SeirSimulator::SeirSimulator(const MobilityNetwork& network,
                             const DiseaseParams& params)
    : network_(network), params_(params) {
  population_.reserve(network.num_cbgs());
  inv_population_.reserve(network.num_cbgs());
  for (const Cbg& c : network.cbgs()) {
    population_.push_back(static_cast<double>(c.population));
    inv_population_.push_back(1.0 / static_cast<double>(c.population));
  }
  poi_coefficient_.reserve(network.num_pois());
  for (const Poi& p : network.pois()) {
    poi_coefficient_.push_back(params.psi * p.dwell_fraction *
                               p.dwell_fraction / p.area_sqft);
  }
}

absl::Status SeirSimulator::CheckIndices(std::span<const int> cbgs,
                                         const char* what) const {
  for (int c : cbgs) {
    if (c < 0 || c >= network_.num_cbgs()) {
      return absl::InvalidArgumentError(
          absl::StrCat(what, ": unknown CBG index ", c));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SeirState> SeirSimulator::InitState(
    std::span<const int> seeded) const {
  RETURN_IF_ERROR(CheckIndices(seeded, "seeded"));
  const int k = network_.num_cbgs();
  SeirState state;
  state.s = population_;
  state.e.assign(k, 0.0);
  state.i.assign(k, 0.0);
  state.r.assign(k, 0.0);
  state.vaccinated.assign(k, 0.0);
  for (int c : seeded) {
    if (state.e[c] > 0) continue;
    const double exposed =
        std::min(population_[c], std::floor(population_[c] * params_.p0 + 0.5));
    state.e[c] = exposed;
    state.s[c] = population_[c] - exposed;
  }
  return state;
}

void SeirSimulator::Step(SeirState& state, int hour,
                         std::span<const uint8_t> vaccinated_mask, Rng& rng,
                         SimulationMode mode) const {
  Workspace ws;
  StepWith(state, hour, vaccinated_mask, rng, mode, ws);
}

void SeirSimulator::StepWith(SeirState& state, int hour,
                             std::span<const uint8_t> vaccinated_mask,
                             Rng& rng, SimulationMode mode,
                             Workspace& ws) const {
  const int k = network_.num_cbgs();
  ws.poi_pressure.assign(k, 0.0);

  bool any_infectious = false;
  for (int c = 0; c < k && !any_infectious; ++c) {
    any_infectious = state.i[c] > 0;
  }

  // POI route: expected infectious visitors per POI, then each CBG's
  // exposure summed over the POIs its residents visit this hour.
  if (any_infectious) {
    const std::span<const Visit> visits = network_.visits().AtHour(hour);
    if (!visits.empty()) {
      ws.infectious_visitors.assign(network_.num_pois(), 0.0);
      for (const Visit& v : visits) {
        const double infectious = state.i[v.cbg];
        if (infectious > 0) {
          ws.infectious_visitors[v.poi] +=
              v.weight * infectious * inv_population_[v.cbg];
        }
      }
      for (const Visit& v : visits) {
        const double rate =
            poi_coefficient_[v.poi] * ws.infectious_visitors[v.poi];
        if (rate > 0) ws.poi_pressure[v.cbg] += rate * v.weight;
      }
    }
  }

  const bool stochastic = mode == SimulationMode::kStochastic;
  const double p_ei = 1.0 / params_.delta_e_hours;
  const double p_ir = 1.0 / params_.delta_i_hours;
  for (int c = 0; c < k; ++c) {
    const double s = state.s[c];
    const double e = state.e[c];
    const double i = state.i[c];

    double new_exposed = 0.0;
    const bool masked = !vaccinated_mask.empty() && vaccinated_mask[c];
    if (s > 0 && !masked) {
      const double poi_mean = s * inv_population_[c] * ws.poi_pressure[c];
      const double home_p =
          std::min(1.0, params_.beta_home * i * inv_population_[c]);
      if (stochastic) {
        if (poi_mean > 0) {
          new_exposed += static_cast<double>(
              std::poisson_distribution<int64_t>(poi_mean)(rng));
        }
        if (home_p > 0) {
          new_exposed += static_cast<double>(std::binomial_distribution<int64_t>(
              static_cast<int64_t>(s), home_p)(rng));
        }
      } else {
        new_exposed = poi_mean + s * home_p;
      }
      new_exposed = std::min(new_exposed, s);
    }

    double new_infectious = 0.0;
    if (e > 0) {
      new_infectious =
          stochastic ? static_cast<double>(std::binomial_distribution<int64_t>(
                           static_cast<int64_t>(e), p_ei)(rng))
                     : e * p_ei;
    }
    double new_removed = 0.0;
    if (i > 0) {
      new_removed =
          stochastic ? static_cast<double>(std::binomial_distribution<int64_t>(
                           static_cast<int64_t>(i), p_ir)(rng))
                     : i * p_ir;
    }

    state.s[c] = s - new_exposed;
    state.e[c] = e - new_infectious + new_exposed;
    state.i[c] = i + new_infectious - new_removed;
    state.r[c] += new_removed;
  }
  ++state.hour;
}

SeirState SeirSimulator::Simulate(const RunOptions& options,
                                  std::vector<SeirTotals>* trajectory) const {
  SeirState state = *InitState(options.seeded);
  Rng rng(MixSeed(options.rng_seed));
  Workspace ws;
  std::vector<uint8_t> mask;
  auto vaccinate = [&] {
    mask.assign(network_.num_cbgs(), 0);
    for (int c : options.vaccinated) {
      if (mask[c]) continue;
      mask[c] = 1;
      state.vaccinated[c] += state.s[c];
      state.r[c] += state.s[c];
      state.s[c] = 0.0;
    }
  };
  if (trajectory) trajectory->push_back(Totals(state));
  for (int t = 0; t < options.horizon_hours; ++t) {
    if (t == options.vaccination_hour && !options.vaccinated.empty()) {
      vaccinate();
    }
    StepWith(state, t, mask, rng, options.mode, ws);
    if (trajectory) trajectory->push_back(Totals(state));
  }
  if (options.vaccination_hour == options.horizon_hours &&
      !options.vaccinated.empty()) {
    vaccinate();
  }
  return state;
}

absl::StatusOr<SimulationResult> SeirSimulator::Run(
    const RunOptions& options) const {
  RETURN_IF_ERROR(params_.Validate());
  RETURN_IF_ERROR(CheckIndices(options.seeded, "seeded"));
  RETURN_IF_ERROR(CheckIndices(options.vaccinated, "vaccinated"));
  if (options.horizon_hours < 0 || options.vaccination_hour < 0 ||
      options.vaccination_hour > options.horizon_hours) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need 0 <= vaccination_hour <= horizon_hours, got ",
        options.vaccination_hour, " and ", options.horizon_hours));
  }

  SimulationResult result;
  result.final_state = Simulate(
      options, options.record_trajectory ? &result.trajectory : nullptr);
  const SeirState& st = result.final_state;
  result.eir_by_race.assign(network_.num_race_groups(), 0.0);
  result.eir_by_income.assign(kNumIncomeGroups, 0.0);
  for (int c = 0; c < network_.num_cbgs(); ++c) {
    const double eir = st.Eir(c);
    const Cbg& cbg = network_.cbg(c);
    result.eir_total += eir;
    result.vaccinated_total += st.vaccinated[c];
    for (size_t j = 0; j < cbg.racial_fractions.size(); ++j) {
      result.eir_by_race[j] += eir * cbg.racial_fractions[j];
    }
    result.eir_by_income[cbg.income_group - 1] += eir;
  }
  return result;
}

absl::StatusOr<SimulationResult> SeirSimulator::RunMeanField(
    RunOptions options) const {
  options.mode = SimulationMode::kMeanField;
  return Run(options);
}

double SeirSimulator::Influence(std::span<const int> seed_set,
                                int window_hours, int replicates,
                                uint64_t rng_seed, SimulationMode mode,
                                bool risk_weighted) const {
  assert(CheckIndices(seed_set, "seed_set").ok());
  if (mode == SimulationMode::kMeanField) replicates = 1;
  replicates = std::max(replicates, 1);
  RunOptions options;
  options.seeded.assign(seed_set.begin(), seed_set.end());
  options.horizon_hours = window_hours;
  options.mode = mode;
  double total = 0.0;
  for (int r = 0; r < replicates; ++r) {
    options.rng_seed = DeriveSeed(rng_seed, r);
    const SeirState state = Simulate(options, nullptr);
    double value = 0.0;
    for (int c = 0; c < state.num_cbgs(); ++c) {
      const double eir = state.Eir(c);
      value += risk_weighted ? network_.cbg(c).risk_weight * eir : eir;
    }
    total += value;
  }
  return total / replicates;
}

double SeirSimulator::Sigma(std::span<const int> seed_set, int window_hours,
                            int replicates, uint64_t rng_seed,
                            SimulationMode mode) const {
  return Influence(seed_set, window_hours, replicates, rng_seed, mode, false);
}

double SeirSimulator::SigmaA(std::span<const int> seed_set, int window_hours,
                             int replicates, uint64_t rng_seed,
                             SimulationMode mode) const {
  return Influence(seed_set, window_hours, replicates, rng_seed, mode, true);
}

}  // namespace fairvax
