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

// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances and fixture sizes are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fairvax/disease_model.h"
#include "fairvax/experiment.h"
#include "fairvax/fairness_metrics.h"
#include "fairvax/im_selector.h"
#include "fairvax/mobility_network.h"
#include "fairvax/parallel.h"
#include "fairvax/random.h"
#include "fairvax/synthetic.h"

namespace fairvax {
namespace {

// Pinned tolerances and sizes.
constexpr int kConservationRuns = 1000;
constexpr double kConservationSeconds = 60;
constexpr int kMonteCarloRuns = 10000;
constexpr double kMonteCarloRelTol = 0.02;
constexpr double kMonteCarloSeconds = 300;
constexpr double kOracleMinRatio = 0.63;
constexpr double kOracleSeconds = 600;
constexpr int kFeasibilityNetworks = 200;
constexpr double kIncomeKlMax = 1e-3;
constexpr double kRaceKlMax = 5e-3;
constexpr double kLargeExperimentSeconds = 7200;
constexpr int kDirectionalSeeds = 30;
constexpr uint64_t kLargeNetworkSeeds[] = {1, 2, 3};
constexpr double kClosedFormTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int g_failures = 0;

void Report(const std::string& name, const std::function<Outcome()>& check,
            double time_limit_seconds = 0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = check();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (time_limit_seconds > 0 && seconds > time_limit_seconds) {
    out.Fail(absl::StrFormat("runtime %.1fs exceeds %.0fs; %s", seconds,
                             time_limit_seconds, out.detail));
  }
  if (!out.pass) ++g_failures;
  std::printf("%s %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", name.c_str(),
              out.detail.c_str(), seconds);
  std::fflush(stdout);
}

MobilityNetwork Generate(const SyntheticSpec& spec, uint64_t seed) {
  absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, seed);
  if (!net.ok()) {
    std::fprintf(stderr, "generator failed: %s\n",
                 net.status().ToString().c_str());
    std::exit(2);
  }
  return *std::move(net);
}

SyntheticSpec SmallSpec(int k, int pois, int horizon) {
  SyntheticSpec spec;
  spec.num_cbgs = k;
  spec.num_pois = pois;
  spec.horizon_hours = horizon;
  return spec;
}

// --- Conservation -----------------------------------------------------------

Outcome Conservation() {
  Outcome out;
  std::mt19937_64 rng(20261016);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto integer = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  int64_t hours_checked = 0;
  int zero_transmission_runs = 0;
  for (int run = 0; run < kConservationRuns && out.pass; ++run) {
    SyntheticSpec spec = SmallSpec(integer(1, 50), integer(1, 40), integer(12, 96));
    spec.num_race_groups = integer(1, 5);
    spec.mean_visits_per_hour = uniform(1, 40);
    spec.mean_poi_area_sqft = uniform(200, 20000);
    spec.min_population = integer(1, 600);
    spec.max_population = spec.min_population + integer(0, 3000);
    const MobilityNetwork net = Generate(spec, rng());
    DiseaseParams params;
    params.beta_home = uniform(0, 0.2);
    params.psi = uniform(0, 3000);
    params.p0 = uniform(0, 0.2);
    params.delta_e_hours = uniform(1, 150);
    params.delta_i_hours = uniform(1, 150);
    const bool zero_transmission = run % 10 == 0;
    if (zero_transmission) {
      params.beta_home = 0;
      params.psi = 0;
    }
    const SeirSimulator sim(net, params);
    std::vector<int> seeded;
    for (int c = 0; c < net.num_cbgs(); ++c) {
      if (rng() % 2 == 0) seeded.push_back(c);
    }
    std::vector<uint8_t> mask(net.num_cbgs(), 0);
    for (uint8_t& m : mask) m = rng() % 4 == 0;

    SeirState state = *sim.InitState(seeded);
    const double initial_e =
        std::accumulate(state.e.begin(), state.e.end(), 0.0);
    Rng step_rng(rng());
    std::vector<double> prev_r = state.r;
    std::vector<double> prev_s = state.s;
    for (int t = 0; t < spec.horizon_hours && out.pass; ++t) {
      sim.Step(state, t, mask, step_rng);
      ++hours_checked;
      for (int c = 0; c < net.num_cbgs(); ++c) {
        const double n = static_cast<double>(net.cbg(c).population);
        const double s = state.s[c], e = state.e[c], i = state.i[c],
                     r = state.r[c];
        if (s + e + i + r != n) {
          out.Fail(absl::StrFormat("run %d hour %d CBG %d: S+E+I+R=%.17g, n=%g",
                                   run, t, c, s + e + i + r, n));
        } else if (std::min({s, e, i, r}) < 0 || s != std::floor(s) ||
                   e != std::floor(e) || i != std::floor(i)) {
          out.Fail(absl::StrFormat("run %d hour %d CBG %d: non-integer or "
                                   "negative compartment", run, t, c));
        } else if (r < prev_r[c] || s > prev_s[c]) {
          out.Fail(absl::StrFormat("run %d hour %d CBG %d: R decreased or S "
                                   "increased", run, t, c));
        } else if (mask[c] && s != prev_s[c]) {
          out.Fail(absl::StrFormat("run %d hour %d CBG %d: masked CBG exposed",
                                   run, t, c));
        }
      }
      prev_r = state.r;
      prev_s = state.s;
    }

    // Whole-run check through Run(), including vaccination.
    RunOptions options;
    options.seeded = seeded;
    for (int c = 0; c < net.num_cbgs(); ++c) {
      if (mask[c]) options.vaccinated.push_back(c);
    }
    options.vaccination_hour = integer(0, spec.horizon_hours);
    options.horizon_hours = spec.horizon_hours;
    options.rng_seed = rng();
    options.record_trajectory = true;
    const SimulationResult result = *sim.Run(options);
    const double total = static_cast<double>(net.total_population());
    double prev_total_r = 0;
    for (size_t t = 0; t < result.trajectory.size() && out.pass; ++t) {
      const SeirTotals& x = result.trajectory[t];
      if (x.s + x.e + x.i + x.r != total) {
        out.Fail(absl::StrFormat("run %d: network total %.17g at hour %d, "
                                 "expected %g", run, x.s + x.e + x.i + x.r,
                                 static_cast<int>(t), total));
      }
      if (x.r < prev_total_r) {
        out.Fail(absl::StrFormat("run %d: total R decreased at hour %d", run,
                                 static_cast<int>(t)));
      }
      prev_total_r = x.r;
    }
    if (zero_transmission && out.pass) {
      ++zero_transmission_runs;
      RunOptions plain;
      plain.seeded = seeded;
      plain.horizon_hours = spec.horizon_hours;
      plain.rng_seed = rng();
      const double eir = sim.Run(plain)->eir_total;
      if (eir != initial_e) {
        out.Fail(absl::StrFormat("run %d: zero transmission gave eir_total %g, "
                                 "initial E %g", run, eir, initial_e));
      }
    }
  }
  if (out.pass) {
    out.detail = absl::StrFormat(
        "%d runs, %d CBG-hours per-CBG checked, %d zero-transmission runs "
        "matched initial E", kConservationRuns, hours_checked,
        zero_transmission_runs);
  }
  return out;
}

// --- Monte Carlo vs mean-field ---------------------------------------------

Outcome MonteCarloVsMeanField() {
  Outcome out;
  SyntheticSpec spec = SmallSpec(20, 50, 336);
  const MobilityNetwork net = Generate(spec, 11);
  DiseaseParams params;
  params.p0 = 0.01;
  const SeirSimulator sim(net, params);
  RunOptions options;
  options.seeded.resize(net.num_cbgs());
  std::iota(options.seeded.begin(), options.seeded.end(), 0);
  options.horizon_hours = 336;
  const double mean_field = sim.RunMeanField(options)->eir_total;
  double sum = 0;
  for (int k = 0; k < kMonteCarloRuns; ++k) {
    options.rng_seed = DeriveSeed(77, k);
    sum += sim.Run(options)->eir_total;
  }
  const double mc = sum / kMonteCarloRuns;
  const double rel = std::abs(mc - mean_field) / mean_field;
  out.detail = absl::StrFormat(
      "mean of %d stochastic runs %.2f, mean-field %.2f, relative gap %.4f "
      "(limit %.2f)", kMonteCarloRuns, mc, mean_field, rel, kMonteCarloRelTol);
  if (rel > kMonteCarloRelTol) out.Fail(out.detail);
  return out;
}

// --- Greedy oracle ----------------------------------------------------------

bool GroupFeasible(const MobilityNetwork& net, const std::vector<int>& z,
                   double budget, std::optional<Grouping> grouping) {
  double used = 0;
  for (int c : z) used += static_cast<double>(net.cbg(c).population);
  if (used > budget) return false;
  if (!grouping) return true;
  const GroupBudgets b = ComputeGroupBudgets(net, *grouping, budget);
  const std::vector<double> per_group = GroupUsage(net, z, *grouping);
  for (size_t j = 0; j < per_group.size(); ++j) {
    if (per_group[j] > b.budgets[j] + kGroupBudgetSlack) return false;
  }
  return true;
}

// At every step, evaluate every feasible candidate and take the best
// normalized gain, lowest index first on ties.
std::vector<int> StepwiseOracle(const MobilityNetwork& net,
                                const InfluenceFunction& f, double budget,
                                std::optional<Grouping> grouping) {
  std::vector<int> chosen;
  double current = f.Evaluate(chosen);
  while (true) {
    int best = -1;
    double best_gain = 0, best_value = 0;
    for (int c = 0; c < net.num_cbgs(); ++c) {
      if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
      std::vector<int> z = chosen;
      z.push_back(c);
      if (!GroupFeasible(net, z, budget, grouping)) continue;
      const double value = f.Evaluate(z);
      const double gain =
          (value - current) / static_cast<double>(net.cbg(c).population);
      if (best < 0 || gain > best_gain) {
        best = c;
        best_gain = gain;
        best_value = value;
      }
    }
    if (best < 0) return chosen;
    chosen.push_back(best);
    current = best_value;
  }
}

Outcome GreedyOracle() {
  Outcome out;
  double worst_ratio = 1.0;
  int cases = 0;
  for (int fixture = 0; fixture < 5; ++fixture) {
    const int k = 6 + fixture;
    SyntheticSpec spec = SmallSpec(k, 12, 168);
    const MobilityNetwork net = Generate(spec, 100 + fixture);
    DiseaseParams params;
    params.p0 = 0.01;
    const SeirSimulator sim(net, params);
    for (StrategyKind kind :
         {StrategyKind::kIm, StrategyKind::kImRace, StrategyKind::kImIncome,
          StrategyKind::kImAge}) {
      const SimulationInfluence f(sim, 168, 1, 0, SimulationMode::kMeanField,
                                  UsesRiskWeights(kind));
      GreedyOptions opt;
      opt.budget = 0.35 * static_cast<double>(net.total_population());
      opt.lazy_eval = false;
      opt.grouping = FairnessGrouping(kind);
      const SelectionResult r = SelectGreedy(net, f, opt);
      ++cases;
      const std::string where =
          absl::StrCat("fixture K=", k, " ", StrategyName(kind));
      if (r.selected != StepwiseOracle(net, f, opt.budget, opt.grouping)) {
        out.Fail(where + ": differs from step-wise oracle");
      }
      // Each accepted CBG had the best normalized gain when accepted.
      std::vector<int> prefix;
      for (const GainRecord& g : r.gain_trace) {
        const double base = f.Evaluate(prefix);
        for (int c = 0; c < net.num_cbgs(); ++c) {
          if (std::find(prefix.begin(), prefix.end(), c) != prefix.end()) continue;
          std::vector<int> z = prefix;
          z.push_back(c);
          if (!GroupFeasible(net, z, opt.budget, opt.grouping)) continue;
          const double gain = (f.Evaluate(z) - base) /
                              static_cast<double>(net.cbg(c).population);
          if (gain > g.normalized_gain + 1e-9 * std::abs(g.normalized_gain)) {
            out.Fail(where + ": gain trace not dominant");
          }
        }
        prefix.push_back(g.cbg);
      }
      // Exhaustive enumeration of feasible subsets.
      double best = 0;
      for (uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<int> z;
        for (int c = 0; c < k; ++c) {
          if (mask & (1u << c)) z.push_back(c);
        }
        if (!GroupFeasible(net, z, opt.budget, opt.grouping)) continue;
        best = std::max(best, f.Evaluate(z));
      }
      const double ratio = best > 0 ? f.Evaluate(r.selected) / best : 1.0;
      worst_ratio = std::min(worst_ratio, ratio);
      if (ratio < kOracleMinRatio) {
        out.Fail(absl::StrFormat("%s: ratio %.4f below %.2f", where, ratio,
                                 kOracleMinRatio));
      }
    }
  }
  if (out.pass) {
    out.detail = absl::StrFormat(
        "%d fixture/strategy cases match the step-wise oracle; worst "
        "greedy/optimal ratio %.4f (limit %.2f)", cases, worst_ratio,
        kOracleMinRatio);
  }
  return out;
}

// --- CELF equivalence -------------------------------------------------------

class WeightedCoverage : public InfluenceFunction {
 public:
  WeightedCoverage(std::vector<std::vector<int>> covers,
                   std::vector<double> weights)
      : covers_(std::move(covers)), weights_(std::move(weights)) {}

  double Evaluate(std::span<const int> z) const override {
    std::set<int> covered;
    for (int c : z) covered.insert(covers_[c].begin(), covers_[c].end());
    double total = 0;
    for (int item : covered) total += weights_[item];
    return total;
  }

 private:
  std::vector<std::vector<int>> covers_;
  std::vector<double> weights_;
};

Outcome CelfEquivalence() {
  Outcome out;
  std::mt19937_64 rng(5);
  std::string counts;
  for (int k : {20, 35, 50, 100, 200}) {
    const int items = 3 * k;
    std::vector<std::vector<int>> covers(k);
    for (auto& cover : covers) {
      for (int item = 0; item < items; ++item) {
        if (rng() % 10 == 0) cover.push_back(item);
      }
    }
    std::vector<double> weights(items);
    for (double& w : weights) {
      w = std::uniform_real_distribution<double>(0.1, 10)(rng);
    }
    const WeightedCoverage f(covers, weights);
    SyntheticSpec spec = SmallSpec(k, 1, 1);
    const MobilityNetwork net = Generate(spec, k);
    GreedyOptions opt;
    opt.budget = 0.3 * static_cast<double>(net.total_population());
    opt.lazy_eval = true;
    const SelectionResult lazy = SelectGreedy(net, f, opt);
    opt.lazy_eval = false;
    const SelectionResult eager = SelectGreedy(net, f, opt);
    if (lazy.selected != eager.selected) {
      out.Fail(absl::StrCat("K=", k, ": lazy and eager selections differ"));
    }
    if (lazy.evaluation_count >= eager.evaluation_count) {
      out.Fail(absl::StrCat("K=", k, ": lazy used ", lazy.evaluation_count,
                            " evaluations, eager ", eager.evaluation_count));
    }
    absl::StrAppend(&counts, counts.empty() ? "" : ", ", "K=", k, " ",
                    lazy.evaluation_count, "/", eager.evaluation_count);
  }
  if (out.pass) {
    out.detail = absl::StrCat("identical selections; lazy/eager evaluations: ",
                              counts);
  }
  return out;
}

// --- Budget feasibility -----------------------------------------------------

Outcome BudgetFeasibility() {
  Outcome out;
  std::mt19937_64 rng(99);
  auto integer = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  double worst_overshoot = -1e300;
  int selections = 0;
  for (int n = 0; n < kFeasibilityNetworks && out.pass; ++n) {
    SyntheticSpec spec = SmallSpec(integer(2, 40), integer(1, 40), integer(12, 48));
    spec.num_race_groups = integer(1, 5);
    spec.mixing = rng() % 2 ? RaceMixing::kSegregated : RaceMixing::kMixed;
    spec.min_population = integer(1, 1000);
    spec.max_population = spec.min_population + integer(0, 3000);
    const MobilityNetwork net = Generate(spec, rng());
    const double fraction =
        std::uniform_real_distribution<double>(0.01, 0.6)(rng);
    for (StrategyKind kind : kAllStrategies) {
      StrategySpec s;
      s.kind = kind;
      s.budget_fraction = fraction;
      s.selection_window_hours = spec.horizon_hours;
      s.sigma_replicates = 1;
      s.sigma_mode =
          n % 2 ? SimulationMode::kMeanField : SimulationMode::kStochastic;
      absl::StatusOr<SelectionResult> r =
          SelectStrategy(net, DiseaseParams{}, s, rng());
      if (!r.ok()) {
        out.Fail(absl::StrCat("network ", n, " ", StrategyName(kind), ": ",
                              r.status().message()));
        break;
      }
      ++selections;
      const double budget = TotalBudget(net, fraction);
      double used = 0;
      for (int c : r->selected) used += static_cast<double>(net.cbg(c).population);
      const std::set<int> unique(r->selected.begin(), r->selected.end());
      if (used > budget || unique.size() != r->selected.size()) {
        out.Fail(absl::StrFormat("network %d %s: vaccinated %g > budget %g",
                                 n, StrategyName(kind), used, budget));
      }
      if (std::optional<Grouping> g = FairnessGrouping(kind)) {
        const GroupBudgets b = ComputeGroupBudgets(net, *g, budget);
        const std::vector<double> per_group = GroupUsage(net, r->selected, *g);
        for (size_t j = 0; j < per_group.size(); ++j) {
          worst_overshoot = std::max(worst_overshoot, per_group[j] - b.budgets[j]);
          if (per_group[j] > b.budgets[j] + kGroupBudgetSlack) {
            out.Fail(absl::StrFormat(
                "network %d %s: group %d consumed %g > %g + %g", n,
                StrategyName(kind), static_cast<int>(j), per_group[j],
                b.budgets[j], kGroupBudgetSlack));
          }
        }
      }
    }
  }
  if (out.pass) {
    out.detail = absl::StrFormat(
        "%d networks, %d selections within budget; largest group overshoot "
        "%.3f persons (limit %.1f)", kFeasibilityNetworks, selections,
        worst_overshoot, kGroupBudgetSlack);
  }
  return out;
}

// --- Large segregated networks ----------------------------------------------

struct LargeRun {
  uint64_t network_seed;
  ExperimentReport report;
};

std::vector<LargeRun>& LargeRuns() {
  static std::vector<LargeRun> runs;
  return runs;
}

ExperimentConfig LargeConfig(uint64_t network_seed) {
  ExperimentConfig c;
  c.synthetic.num_cbgs = 200;
  c.synthetic.mixing = RaceMixing::kSegregated;
  c.network_seed = network_seed;
  c.budget_fraction = 0.05;
  c.n_seeds = kDirectionalSeeds;
  c.selection_seed = network_seed;
  c.evaluation_seed = 1000 + network_seed;
  c.workers = DefaultWorkerCount();
  return c;
}

double Mean(const ExperimentReport& report, StrategyKind kind,
            const std::string& metric) {
  for (const StrategySummary& s : report.summaries) {
    if (s.strategy == kind) {
      auto it = s.metrics.find(metric);
      return it == s.metrics.end() ? NAN : it->second.mean;
    }
  }
  return NAN;
}

Outcome RunLargeExperiments() {
  Outcome out;
  for (uint64_t seed : kLargeNetworkSeeds) {
    absl::StatusOr<ExperimentReport> report = RunExperiment(LargeConfig(seed));
    if (!report.ok()) {
      out.Fail(absl::StrCat("network ", seed, ": ", report.status().message()));
      continue;
    }
    if (!report->failures.empty()) {
      out.Fail(absl::StrCat("network ", seed, ": ",
                            report->failures.begin()->first, " failed: ",
                            report->failures.begin()->second));
    }
    LargeRuns().push_back({seed, *std::move(report)});
  }
  if (out.pass) {
    out.detail = absl::StrCat(LargeRuns().size(),
                              " K=200 segregated networks, all strategies, ",
                              kDirectionalSeeds, " paired seeds each");
  }
  return out;
}

Outcome EqualTreatment() {
  Outcome out;
  if (LargeRuns().empty()) {
    out.Fail("no experiment results");
    return out;
  }
  std::string values;
  for (const LargeRun& run : LargeRuns()) {
    const auto check = [&](StrategyKind kind, const char* metric,
                           double limit) {
      const double kl = Mean(run.report, kind, metric);
      absl::StrAppendFormat(&values, "%snet%d %s %.2e", values.empty() ? "" : ", ",
                            run.network_seed, StrategyName(kind), kl);
      if (!(kl <= limit)) {
        out.Fail("");
      }
    };
    check(StrategyKind::kImIncome, "treatment_kl_income", kIncomeKlMax);
    check(StrategyKind::kImIncomeAge, "treatment_kl_income", kIncomeKlMax);
    check(StrategyKind::kImRace, "treatment_kl_race", kRaceKlMax);
    check(StrategyKind::kImRaceAge, "treatment_kl_race", kRaceKlMax);
  }
  out.detail = absl::StrFormat(
      "treatment KL (income limit %.0e, race limit %.0e): %s", kIncomeKlMax,
      kRaceKlMax, values);
  return out;
}

Outcome Directional() {
  Outcome out;
  if (LargeRuns().empty()) {
    out.Fail("no experiment results");
    return out;
  }
  std::string values;
  for (const LargeRun& run : LargeRuns()) {
    const ExperimentReport& r = run.report;
    const double im = Mean(r, StrategyKind::kIm, "pct_decrease");
    const double rand = Mean(r, StrategyKind::kRandom, "pct_decrease");
    const double cs = Mean(r, StrategyKind::kOldest, "pct_decrease");
    const double cs_risk =
        Mean(r, StrategyKind::kOldest, "risk_weighted_pct_decrease");
    absl::StrAppendFormat(&values,
                          "%snet%d IM %.2f%% RAND %.2f%% CS %.2f%%; risk-weighted "
                          "CS %.2f%%",
                          values.empty() ? "" : " | ", run.network_seed, im,
                          rand, cs, cs_risk);
    if (!(im > rand)) out.Fail("");
    if (!(im > cs)) out.Fail("");
    for (StrategyKind kind : {StrategyKind::kImAge, StrategyKind::kImRaceAge,
                              StrategyKind::kImIncomeAge}) {
      const double v = Mean(r, kind, "risk_weighted_pct_decrease");
      absl::StrAppendFormat(&values, " %s %.2f%%", StrategyName(kind), v);
      if (!(v > cs_risk)) out.Fail("");
    }
  }
  out.detail = values;
  return out;
}

// --- Metric closed forms ----------------------------------------------------

Outcome ClosedForms() {
  Outcome out;
  auto dist = [](std::vector<double> v) {
    return GroupDistribution{Grouping::kRace, std::move(v)};
  };
  auto expect = [&](const std::string& what, double got, double want,
                    double tol) {
    if (!(std::abs(got - want) <= tol)) {
      out.Fail(absl::StrFormat("%s: got %.17g, want %.17g", what, got, want));
    }
  };
  expect("KL(p||p)", *KlDivergence(dist({0.2, 0.3, 0.5}), dist({0.2, 0.3, 0.5})),
         0.0, kClosedFormTol);
  expect("KL((1,0)||(.5,.5))", *KlDivergence(dist({1, 0}), dist({0.5, 0.5})),
         std::log(2.0), kClosedFormTol);
  expect("KL((.5,.5)||(.25,.75))",
         *KlDivergence(dist({0.5, 0.5}), dist({0.25, 0.75})),
         0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), kClosedFormTol);
  expect("pct_decrease(360000, 342000)", *PctDecrease(360000, 342000), 5.0, 0);
  expect("pct_decrease(b, b)", *PctDecrease(1234, 1234), 0.0, 0);
  expect("pct_decrease(b, 0)", *PctDecrease(1234, 0), 100.0, 0);
  expect("pct_decrease(200, 300)", *PctDecrease(200, 300), -50.0, 0);

  // Ages 86, 35 and 22 map to risk weights 350, 3.5 and 1.
  std::vector<Cbg> cbgs;
  const double ages[] = {86, 35, 22};
  for (int c = 0; c < 3; ++c) {
    Cbg cbg;
    cbg.id = c + 1;
    cbg.population = 100;
    cbg.racial_fractions = {1.0};
    cbg.median_income = 1000.0 * (c + 1);
    cbg.median_age = ages[c];
    cbgs.push_back(cbg);
  }
  const MobilityNetwork net =
      *MobilityNetwork::Create(cbgs, {}, VisitMatrix{}, {"1"});
  SimulationResult result;
  result.final_state.s = {98, 90, 80};
  result.final_state.e = {1, 4, 0};
  result.final_state.i = {1, 0, 5};
  result.final_state.r = {0, 6, 15};
  result.final_state.vaccinated = {0, 6, 10};
  result.eir_total = 2 + 4 + 10;
  // 350 * 2 + 3.5 * 4 + 1 * 10; vaccinated residents are excluded.
  expect("risk_weighted_eir", RiskWeightedEir(result, net), 724.0, 0);
  for (double& r : result.final_state.r) r = 0;
  result.final_state.vaccinated = {0, 0, 0};
  result.final_state.e = {1, 1, 1};
  result.final_state.i = {0, 0, 0};
  expect("risk_weighted_eir unit EIR", RiskWeightedEir(result, net), 354.5, 0);
  if (out.pass) {
    out.detail = "3 KL examples within 1e-12; pct_decrease and "
                 "risk_weighted_eir fixtures exact";
  }
  return out;
}

// --- Determinism ------------------------------------------------------------

Outcome Determinism() {
  Outcome out;
  ExperimentConfig c;
  c.synthetic.num_cbgs = 40;
  c.synthetic.num_pois = 80;
  c.synthetic.horizon_hours = 240;
  c.network_seed = 8;
  c.selection_window_hours = 96;
  c.horizon_hours = 240;
  c.n_seeds = 4;
  c.sigma_replicates = 2;
  c.budget_fraction = 0.1;
  const MobilityNetwork net = *BuildNetwork(c);
  std::vector<std::string> dumps;
  for (int workers : {1, 1, 4}) {
    c.workers = workers;
    nlohmann::json j = ReportToJson(*RunExperiment(c, net), net);
    j.erase("generated_at");
    dumps.push_back(j.dump());
  }
  if (dumps[0] != dumps[1]) out.Fail("two runs with 1 worker differ");
  if (dumps[0] != dumps[2]) out.Fail("1 worker and 4 workers differ");
  if (out.pass) {
    out.detail = absl::StrFormat(
        "report (%d bytes, all strategies) byte-identical across repeats and "
        "worker counts 1/4", static_cast<int>(dumps[0].size()));
  }
  return out;
}

}  // namespace
}  // namespace fairvax

int main() {
  using namespace fairvax;
  Report("metric-closed-forms", ClosedForms);
  Report("conservation", Conservation, kConservationSeconds);
  Report("monte-carlo-vs-mean-field", MonteCarloVsMeanField, kMonteCarloSeconds);
  Report("greedy-oracle", GreedyOracle, kOracleSeconds);
  Report("celf-equivalence", CelfEquivalence);
  Report("budget-feasibility", BudgetFeasibility);
  Report("determinism", Determinism);
  Report("large-network-experiments", RunLargeExperiments,
         kLargeExperimentSeconds);
  // The next two read the reports produced above.
  Report("equal-treatment", EqualTreatment);
  Report("directional-performance", Directional);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
