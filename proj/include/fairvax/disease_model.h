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

#ifndef FAIRVAX_DISEASE_MODEL_H_
#define FAIRVAX_DISEASE_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairvax/config.h"
#include "fairvax/mobility_network.h"
#include "fairvax/random.h"

namespace fairvax {

// Metapopulation SEIR parameters. Rates are per hour; periods are in hours.
struct DiseaseParams {
  double beta_home = 0.02;
  double psi = 300.0;
  // Probability that a resident of a seeded CBG is exposed at hour 0.
  double p0 = 0.001;
  double delta_e_hours = 96.0;
  double delta_i_hours = 84.0;

  absl::Status Validate() const;
};

// Reads beta_home, psi, p0, delta_e_hours and delta_i_hours; missing keys
// keep the defaults. Other keys are ignored.
absl::StatusOr<DiseaseParams> ParseDiseaseParams(const KeyValueConfig& config);

enum class SimulationMode {
  // Poisson/binomial draws on integer compartments.
  kStochastic,
  // Every draw replaced by its expectation; compartments are real-valued.
  kMeanField,
};

// Per-CBG compartment counts. `vaccinated` is the part of `r` that was moved
// there by vaccination and never counts as exposed-or-worse.
struct SeirState {
  std::vector<double> s, e, i, r;
  std::vector<double> vaccinated;
  int hour = 0;

  int num_cbgs() const { return static_cast<int>(s.size()); }
  // Exposed-or-worse residents of one CBG.
  double Eir(int cbg) const { return e[cbg] + i[cbg] + r[cbg] - vaccinated[cbg]; }
  // Compartment counts as fractions of the CBG population.
  std::vector<double> Fractions(const std::vector<double>& compartment,
                                const MobilityNetwork& network) const;
};

struct SeirTotals {
  double s = 0, e = 0, i = 0, r = 0;
};

struct SimulationResult {
  SeirState final_state;
  // N_EIR at the horizon.
  double eir_total = 0.0;
  // N_EIR apportioned by racial fraction and by income group.
  std::vector<double> eir_by_race;
  std::vector<double> eir_by_income;
  double vaccinated_total = 0.0;
  // Network totals after each hour (index 0 is the initial state); empty
  // unless requested.
  std::vector<SeirTotals> trajectory;
};

struct RunOptions {
  // CBG indices exposed at hour 0.
  std::vector<int> seeded;
  // CBG indices whose susceptible residents are vaccinated.
  std::vector<int> vaccinated;
  int vaccination_hour = 0;
  int horizon_hours = 840;
  uint64_t rng_seed = 0;
  SimulationMode mode = SimulationMode::kStochastic;
  bool record_trajectory = false;
};

// Runs the SEIR dynamics on a fixed network. Const methods are thread-safe;
// every run owns its random stream.
class SeirSimulator {
 public:
  SeirSimulator(const MobilityNetwork& network, const DiseaseParams& params);

  const MobilityNetwork& network() const { return network_; }
  const DiseaseParams& params() const { return params_; }

  // E = round(n * p0) in seeded CBGs (half rounds up), S = n - E, I = R = 0.
  absl::StatusOr<SeirState> InitState(std::span<const int> seeded) const;

  // Advances `state` by one hour using the visits of `hour`. CBGs with a
  // nonzero entry in `vaccinated_mask` (empty span: none) receive no new
  // exposures. Draws are clamped so no compartment goes negative.
  void Step(SeirState& state, int hour, std::span<const uint8_t> vaccinated_mask,
            Rng& rng, SimulationMode mode = SimulationMode::kStochastic) const;

  // Initializes, then steps `horizon_hours` times. At the start of
  // `vaccination_hour` the susceptible residents of vaccinated CBGs move to
  // R (tracked separately); if it equals the horizon this happens after the
  // last step.
  absl::StatusOr<SimulationResult> Run(const RunOptions& options) const;

  // Same as Run with every draw replaced by its expected value.
  absl::StatusOr<SimulationResult> RunMeanField(RunOptions options) const;

  // Mean N_EIR over `replicates` unvaccinated runs seeded only in `seed_set`
  // and lasting `window_hours`. Replicate r uses DeriveSeed(rng_seed, r).
  // Mean-field mode runs once.
  double Sigma(std::span<const int> seed_set, int window_hours, int replicates,
               uint64_t rng_seed,
               SimulationMode mode = SimulationMode::kStochastic) const;

  // As Sigma with each CBG's exposed-or-worse count weighted by its risk
  // weight.
  double SigmaA(std::span<const int> seed_set, int window_hours, int replicates,
                uint64_t rng_seed,
                SimulationMode mode = SimulationMode::kStochastic) const;

 private:
  struct Workspace {
    std::vector<double> infectious_visitors;  // per POI
    std::vector<double> poi_pressure;         // per CBG
  };

  absl::Status CheckIndices(std::span<const int> cbgs, const char* what) const;
  void StepWith(SeirState& state, int hour,
                std::span<const uint8_t> vaccinated_mask, Rng& rng,
                SimulationMode mode, Workspace& ws) const;
  SeirState Simulate(const RunOptions& options,
                     std::vector<SeirTotals>* trajectory) const;
  double Influence(std::span<const int> seed_set, int window_hours,
                   int replicates, uint64_t rng_seed, SimulationMode mode,
                   bool risk_weighted) const;

  const MobilityNetwork& network_;
  DiseaseParams params_;
  std::vector<double> population_;
  std::vector<double> inv_population_;
  // psi * d^2 / a for each POI.
  std::vector<double> poi_coefficient_;
};

SeirTotals Totals(const SeirState& state);

}  // namespace fairvax

#endif  // FAIRVAX_DISEASE_MODEL_H_
