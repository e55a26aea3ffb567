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

// Command-line front end: generate, select, simulate, evaluate, experiment,
// export. Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "fairvax/config.h"
#include "fairvax/disease_model.h"
#include "fairvax/experiment.h"
#include "fairvax/fairness_metrics.h"
#include "fairvax/im_selector.h"
#include "fairvax/network_io.h"
#include "fairvax/parallel.h"
#include "fairvax/random.h"
#include "fairvax/selection_io.h"
#include "fairvax/synthetic.h"
#include "json.hpp"

namespace fairvax {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  std::fprintf(stderr, "error: %s\n", status.ToString().c_str());
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

// Simulation flags shared by several subcommands. Values given on the
// command line override keys from the params/config file.
struct ModelFlags {
  std::optional<double> beta_home, psi, p0, delta_e_hours, delta_i_hours;
  std::optional<int> horizon_hours, selection_window_hours, sigma_replicates;
  bool mean_field = false;

  void Register(CLI::App* app) {
    app->add_option("--beta-home", beta_home, "Household transmission rate");
    app->add_option("--psi", psi, "POI transmission constant");
    app->add_option("--p0", p0, "Initial exposed fraction in seeded CBGs");
    app->add_option("--delta-e-hours", delta_e_hours, "Mean latent period");
    app->add_option("--delta-i-hours", delta_i_hours, "Mean infectious period");
    app->add_option("--horizon-hours", horizon_hours, "Simulated hours");
    app->add_option("--selection-window-hours", selection_window_hours,
                    "Hours used for selection; vaccination happens here");
    app->add_option("--sigma-replicates", sigma_replicates,
                    "Stochastic replicates per influence evaluation");
    app->add_flag("--mean-field", mean_field,
                  "Use expected values instead of random draws for influence");
  }

  void ApplyTo(KeyValueConfig& config) const {
    auto set = [&](const char* key, const auto& value) {
      if (value) config.Set(key, absl::StrCat(*value));
    };
    set("beta_home", beta_home);
    set("psi", psi);
    set("p0", p0);
    set("delta_e_hours", delta_e_hours);
    set("delta_i_hours", delta_i_hours);
    set("horizon_hours", horizon_hours);
    set("selection_window_hours", selection_window_hours);
    set("sigma_replicates", sigma_replicates);
    if (mean_field) config.Set("mean_field", "true");
  }
};

absl::StatusOr<KeyValueConfig> LoadConfig(const std::string& path,
                                          const ModelFlags& flags) {
  KeyValueConfig config;
  if (!path.empty()) {
    absl::StatusOr<KeyValueConfig> loaded = KeyValueConfig::Load(path);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  flags.ApplyTo(config);
  return config;
}

struct RunSettings {
  DiseaseParams params;
  int horizon_hours = 840;
  int selection_window_hours = 336;
  int sigma_replicates = 5;
  SimulationMode sigma_mode = SimulationMode::kStochastic;
};

absl::StatusOr<RunSettings> ReadRunSettings(const KeyValueConfig& config) {
  RunSettings s;
  absl::StatusOr<DiseaseParams> params = ParseDiseaseParams(config);
  if (!params.ok()) return params.status();
  s.params = *params;
  absl::StatusOr<int64_t> horizon = config.GetInt("horizon_hours", 840);
  absl::StatusOr<int64_t> window = config.GetInt("selection_window_hours", 336);
  absl::StatusOr<int64_t> reps = config.GetInt("sigma_replicates", 5);
  absl::StatusOr<bool> mean_field = config.GetBool("mean_field", false);
  for (const absl::Status& st : {horizon.status(), window.status(),
                                 reps.status(), mean_field.status()}) {
    if (!st.ok()) return st;
  }
  s.horizon_hours = static_cast<int>(*horizon);
  s.selection_window_hours = static_cast<int>(*window);
  s.sigma_replicates = static_cast<int>(*reps);
  s.sigma_mode =
      *mean_field ? SimulationMode::kMeanField : SimulationMode::kStochastic;
  if (s.horizon_hours < 1 || s.selection_window_hours < 0 ||
      s.selection_window_hours > s.horizon_hours) {
    return absl::InvalidArgumentError(
        "need 0 <= selection_window_hours <= horizon_hours and horizon >= 1");
  }
  if (s.sigma_replicates < 1) {
    return absl::InvalidArgumentError("sigma_replicates must be >= 1");
  }
  return s;
}

int RunGenerate(const std::string& spec_path, uint64_t seed,
                const std::string& out_dir) {
  SyntheticSpec spec;
  if (!spec_path.empty()) {
    absl::StatusOr<KeyValueConfig> config = KeyValueConfig::Load(spec_path);
    if (!config.ok()) return ExitCodeFor(config.status());
    absl::StatusOr<SyntheticSpec> parsed = ParseSyntheticSpec(*config);
    if (!parsed.ok()) return ExitCodeFor(parsed.status());
    spec = *parsed;
  }
  absl::StatusOr<MobilityNetwork> network = GenerateSynthetic(spec, seed);
  if (!network.ok()) return ExitCodeFor(network.status());
  if (absl::Status s = WriteNetworkDir(*network, out_dir); !s.ok()) {
    std::fprintf(stderr, "error: %s\n", s.ToString().c_str());
    return kExitRuntime;
  }
  std::printf("wrote %d CBGs, %d POIs, %zu visit entries to %s\n",
              network->num_cbgs(), network->num_pois(),
              network->visits().num_entries(), out_dir.c_str());
  return kExitOk;
}

struct SelectArgs {
  std::string strategy = "im";
  double budget_fraction = 0.05;
  uint64_t seed = 1;
  std::string network_dir;
  std::string params_path;
  std::string out = "selection.json";
  bool no_lazy = false;
};

int RunSelect(const SelectArgs& args, const ModelFlags& flags) {
  absl::StatusOr<StrategyKind> kind = ParseStrategy(args.strategy);
  if (!kind.ok()) return ExitCodeFor(kind.status());
  absl::StatusOr<KeyValueConfig> config = LoadConfig(args.params_path, flags);
  if (!config.ok()) return ExitCodeFor(config.status());
  absl::StatusOr<RunSettings> settings = ReadRunSettings(*config);
  if (!settings.ok()) return ExitCodeFor(settings.status());
  absl::StatusOr<MobilityNetwork> network = LoadNetworkDir(args.network_dir);
  if (!network.ok()) return ExitCodeFor(network.status());

  StrategySpec spec;
  spec.kind = *kind;
  spec.budget_fraction = args.budget_fraction;
  spec.lazy_eval = !args.no_lazy;
  spec.sigma_replicates = settings->sigma_replicates;
  spec.selection_window_hours = settings->selection_window_hours;
  spec.sigma_mode = settings->sigma_mode;
  absl::StatusOr<SelectionResult> selection = SelectStrategy(
      *network, settings->params, spec, args.seed, DefaultWorkerCount());
  if (!selection.ok()) return ExitCodeFor(selection.status());
  for (const std::string& w : selection->warnings) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  if (absl::Status s =
          WriteJsonFile(args.out, SelectionToJson(*selection, *network));
      !s.ok()) {
    std::fprintf(stderr, "error: %s\n", s.ToString().c_str());
    return kExitRuntime;
  }
  std::printf("%s: %zu CBGs, %.0f of %.0f doses, %lld influence evaluations\n",
              args.strategy.c_str(), selection->selected.size(),
              selection->budget_used, selection->budget,
              static_cast<long long>(selection->evaluation_count));
  return kExitOk;
}

absl::StatusOr<std::vector<int>> ReadSelection(const std::string& path,
                                               const MobilityNetwork& network) {
  if (path.empty()) return std::vector<int>{};
  absl::StatusOr<json> j = ReadJsonFile(path);
  if (!j.ok()) return j.status();
  absl::StatusOr<SelectionResult> sel = SelectionFromJson(*j, network);
  if (!sel.ok()) return sel.status();
  return sel->selected;
}

struct SimulateArgs {
  std::string network_dir;
  std::string params_path;
  std::string selection_path;
  std::optional<int> vaccination_hour;
  uint64_t seed = 1;
  bool per_cbg = false;
  bool trajectory = false;
  std::string out = "simulation.json";
};

int RunSimulate(const SimulateArgs& args, const ModelFlags& flags) {
  absl::StatusOr<KeyValueConfig> config = LoadConfig(args.params_path, flags);
  if (!config.ok()) return ExitCodeFor(config.status());
  // An explicit vaccination hour stands in for the selection window.
  if (args.vaccination_hour) {
    config->Set("selection_window_hours",
                std::to_string(*args.vaccination_hour));
  }
  absl::StatusOr<RunSettings> settings = ReadRunSettings(*config);
  if (!settings.ok()) return ExitCodeFor(settings.status());
  absl::StatusOr<MobilityNetwork> network = LoadNetworkDir(args.network_dir);
  if (!network.ok()) return ExitCodeFor(network.status());
  absl::StatusOr<std::vector<int>> selected =
      ReadSelection(args.selection_path, *network);
  if (!selected.ok()) return ExitCodeFor(selected.status());

  RunOptions options;
  for (int i = 0; i < network->num_cbgs(); ++i) options.seeded.push_back(i);
  options.vaccinated = *selected;
  options.vaccination_hour = settings->selection_window_hours;
  options.horizon_hours = settings->horizon_hours;
  options.rng_seed = args.seed;
  options.record_trajectory = args.trajectory;
  const SeirSimulator simulator(*network, settings->params);
  absl::StatusOr<SimulationResult> result =
      flags.mean_field ? simulator.RunMeanField(options)
                       : simulator.Run(options);
  if (!result.ok()) return ExitCodeFor(result.status());

  json out = SimulationResultToJson(*result, *network, args.per_cbg);
  out["risk_weighted_eir"] = RiskWeightedEir(*result, *network);
  if (absl::Status s = WriteJsonFile(args.out, out); !s.ok()) {
    std::fprintf(stderr, "error: %s\n", s.ToString().c_str());
    return kExitRuntime;
  }
  std::printf("eir_total %.1f, vaccinated %.0f\n", result->eir_total,
              result->vaccinated_total);
  return kExitOk;
}

struct EvaluateArgs {
  std::string selection_path;
  std::string network_dir;
  std::string params_path;
  int seeds = 30;
  uint64_t evaluation_seed = 2;
  std::string out = "report.json";
};

int RunEvaluate(const EvaluateArgs& args, const ModelFlags& flags) {
  if (args.seeds < 1) {
    std::fprintf(stderr, "error: --seeds must be >= 1\n");
    return kExitConfig;
  }
  absl::StatusOr<KeyValueConfig> config = LoadConfig(args.params_path, flags);
  if (!config.ok()) return ExitCodeFor(config.status());
  absl::StatusOr<RunSettings> settings = ReadRunSettings(*config);
  if (!settings.ok()) return ExitCodeFor(settings.status());
  absl::StatusOr<MobilityNetwork> network = LoadNetworkDir(args.network_dir);
  if (!network.ok()) return ExitCodeFor(network.status());
  absl::StatusOr<std::vector<int>> selected =
      ReadSelection(args.selection_path, *network);
  if (!selected.ok()) return ExitCodeFor(selected.status());

  const size_t n = static_cast<size_t>(args.seeds);
  std::vector<absl::StatusOr<RunOutcome>> base(n), treated(n);
  ParallelFor(DefaultWorkerCount(), 2 * n, [&](size_t t) {
    const size_t k = t / 2;
    const uint64_t seed = DeriveSeed(args.evaluation_seed, k);
    const std::vector<int> none;
    auto& slot = t % 2 == 0 ? base[k] : treated[k];
    slot = EvaluateRun(*network, settings->params,
                       t % 2 == 0 ? none : *selected,
                       settings->selection_window_hours,
                       settings->horizon_hours, seed);
  });

  std::map<std::string, std::vector<double>> columns;
  json records = json::array();
  for (size_t k = 0; k < n; ++k) {
    if (!base[k].ok()) return ExitCodeFor(base[k].status());
    if (!treated[k].ok()) return ExitCodeFor(treated[k].status());
    absl::StatusOr<double> pct =
        PctDecrease(base[k]->eir_total, treated[k]->eir_total);
    absl::StatusOr<double> risk_pct = PctDecrease(
        base[k]->risk_weighted_eir, treated[k]->risk_weighted_eir);
    if (!pct.ok()) return ExitCodeFor(pct.status());
    if (!risk_pct.ok()) return ExitCodeFor(risk_pct.status());
    json rec = {{"seed_index", k},
                {"rng_seed", treated[k]->rng_seed},
                {"eir_total", treated[k]->eir_total},
                {"baseline_eir_total", base[k]->eir_total},
                {"risk_weighted_eir", treated[k]->risk_weighted_eir},
                {"pct_decrease", *pct},
                {"risk_weighted_pct_decrease", *risk_pct}};
    columns["eir_total"].push_back(treated[k]->eir_total);
    columns["baseline_eir_total"].push_back(base[k]->eir_total);
    columns["risk_weighted_eir"].push_back(treated[k]->risk_weighted_eir);
    columns["pct_decrease"].push_back(*pct);
    columns["risk_weighted_pct_decrease"].push_back(*risk_pct);
    auto add = [&](const char* key, const std::optional<double>& v) {
      rec[key] = v ? json(*v) : json(nullptr);
      if (v) columns[key].push_back(*v);
    };
    add("treatment_kl_race", treated[k]->treatment_kl_race);
    add("treatment_kl_income", treated[k]->treatment_kl_income);
    add("outcome_kl_race", treated[k]->outcome_kl_race);
    add("outcome_kl_income", treated[k]->outcome_kl_income);
    records.push_back(std::move(rec));
  }
  json summary = json::object();
  for (const auto& [key, values] : columns) {
    const MetricSummary m = Summarize(values);
    summary[key] = {{"mean", m.mean}, {"std", m.std}, {"n", m.count}};
  }
  json report = {{"code_version", kCodeVersion},
                 {"selection", args.selection_path},
                 {"evaluation_seed", args.evaluation_seed},
                 {"summary", summary},
                 {"records", records}};
  if (absl::Status s = WriteJsonFile(args.out, report); !s.ok()) {
    std::fprintf(stderr, "error: %s\n", s.ToString().c_str());
    return kExitRuntime;
  }
  std::printf("pct_decrease %.3f +/- %.3f over %d seeds\n",
              summary["pct_decrease"]["mean"].get<double>(),
              summary["pct_decrease"]["std"].get<double>(), args.seeds);
  return kExitOk;
}

struct ExperimentArgs {
  std::string config_path;
  std::string output_dir;
  std::string network_dir;
  std::vector<std::string> strategies;
  std::optional<int> n_seeds;
  std::optional<double> budget_fraction;
  std::optional<int> workers;
};

int RunExperimentCommand(const ExperimentArgs& args, const ModelFlags& flags) {
  absl::StatusOr<KeyValueConfig> kv = LoadConfig(args.config_path, flags);
  if (!kv.ok()) return ExitCodeFor(kv.status());
  if (!args.output_dir.empty()) kv->Set("output_dir", args.output_dir);
  if (!args.network_dir.empty()) kv->Set("network_dir", args.network_dir);
  if (!args.strategies.empty()) {
    std::string list;
    for (const std::string& s : args.strategies) {
      absl::StrAppend(&list, list.empty() ? "" : ",", s);
    }
    kv->Set("strategies", list);
  }
  if (args.n_seeds) kv->Set("n_seeds", absl::StrCat(*args.n_seeds));
  if (args.budget_fraction) {
    kv->Set("budget_fraction", absl::StrCat(*args.budget_fraction));
  }
  if (args.workers) kv->Set("workers", absl::StrCat(*args.workers));

  absl::StatusOr<ExperimentConfig> config = ParseExperimentConfig(*kv);
  if (!config.ok()) return ExitCodeFor(config.status());
  if (config->output_dir.empty()) {
    std::fprintf(stderr, "error: output_dir is required (--out-dir)\n");
    return kExitConfig;
  }
  absl::StatusOr<MobilityNetwork> network = BuildNetwork(*config);
  if (!network.ok()) return ExitCodeFor(network.status());
  absl::StatusOr<ExperimentReport> report = RunExperiment(*config, *network);
  if (!report.ok()) {
    std::fprintf(stderr, "error: %s\n", report.status().ToString().c_str());
    return kExitRuntime;
  }
  for (const StrategySummary& s : report->summaries) {
    const MetricSummary& pct = s.metrics.at("pct_decrease");
    const MetricSummary& risk = s.metrics.at("risk_weighted_pct_decrease");
    std::printf("%-6s pct_decrease %7.3f +/- %6.3f  risk-weighted %7.3f +/- %6.3f\n",
                std::string(StrategyName(s.strategy)).c_str(), pct.mean,
                pct.std, risk.mean, risk.std);
  }
  for (const auto& [name, message] : report->failures) {
    std::fprintf(stderr, "failed: %s: %s\n", name.c_str(), message.c_str());
  }
  std::printf("report: %s\n",
              (config->output_dir / "report.json").string().c_str());
  return report->failures.empty() ? kExitOk : kExitRuntime;
}

int RunExport(const std::string& report_path, const std::string& out_dir) {
  absl::StatusOr<json> report = ReadJsonFile(report_path);
  if (!report.ok()) return ExitCodeFor(report.status());
  absl::Status s = ExportPlotData(*report, out_dir);
  if (!s.ok()) return ExitCodeFor(s);
  std::printf("wrote performance.csv and fairness.csv to %s\n",
              out_dir.c_str());
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Fair vaccine allocation on mobility networks"};
  app.require_subcommand(1);

  std::string gen_spec, gen_out = "network";
  uint64_t gen_seed = 1;
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic network");
  generate->add_option("--spec", gen_spec, "Synthetic spec file");
  generate->add_option("--seed", gen_seed, "Generator seed");
  generate->add_option("--out", gen_out, "Output directory");

  ModelFlags select_flags;
  SelectArgs select_args;
  CLI::App* select = app.add_subcommand("select", "Choose CBGs to vaccinate");
  select->add_option("--strategy", select_args.strategy,
                     "none|rand|cs|im|im-r|im-i|im-a|im-ra|im-ia");
  select->add_option("--budget-fraction", select_args.budget_fraction,
                     "Vaccine budget as a fraction of the population");
  select->add_option("--seed", select_args.seed, "Selection seed");
  select->add_option("--network", select_args.network_dir, "Network directory")
      ->required();
  select->add_option("--params", select_args.params_path, "Parameter file");
  select->add_option("--out", select_args.out, "Output JSON");
  select->add_flag("--no-lazy", select_args.no_lazy,
                   "Re-evaluate every candidate each round");
  select_flags.Register(select);

  ModelFlags sim_flags;
  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one SEIR simulation");
  simulate->add_option("--network", sim_args.network_dir, "Network directory")
      ->required();
  simulate->add_option("--params", sim_args.params_path, "Parameter file");
  simulate->add_option("--selection", sim_args.selection_path,
                       "Selection JSON to vaccinate");
  simulate->add_option("--vaccination-hour", sim_args.vaccination_hour,
                       "Defaults to the selection window");
  simulate->add_option("--seed", sim_args.seed, "Random seed");
  simulate->add_flag("--per-cbg", sim_args.per_cbg, "Include per-CBG counts");
  simulate->add_flag("--trajectory", sim_args.trajectory,
                     "Include hourly network totals");
  simulate->add_option("--out", sim_args.out, "Output JSON");
  sim_flags.Register(simulate);

  ModelFlags eval_flags;
  EvaluateArgs eval_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Evaluate a selection over many seeds");
  evaluate->add_option("--selection", eval_args.selection_path,
                       "Selection JSON")
      ->required();
  evaluate->add_option("--network", eval_args.network_dir, "Network directory")
      ->required();
  evaluate->add_option("--params", eval_args.params_path, "Parameter file");
  evaluate->add_option("--seeds", eval_args.seeds, "Number of evaluation seeds");
  evaluate->add_option("--evaluation-seed", eval_args.evaluation_seed,
                       "Base evaluation seed");
  evaluate->add_option("--out", eval_args.out, "Output JSON");
  eval_flags.Register(evaluate);

  ModelFlags exp_flags;
  ExperimentArgs exp_args;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run the strategy x seed matrix");
  experiment->add_option("--config", exp_args.config_path, "Experiment config");
  experiment->add_option("--out-dir", exp_args.output_dir, "Output directory");
  experiment->add_option("--network", exp_args.network_dir,
                         "Network directory (instead of synthetic)");
  experiment->add_option("--strategies", exp_args.strategies,
                         "Strategies to run")
      ->delimiter(',');
  experiment->add_option("--n-seeds", exp_args.n_seeds, "Evaluation seeds");
  experiment->add_option("--budget-fraction", exp_args.budget_fraction,
                         "Vaccine budget as a fraction of the population");
  experiment->add_option("--workers", exp_args.workers,
                         "Worker threads (default: FAIRVAX_WORKERS or cores)");
  exp_flags.Register(experiment);

  std::string export_report, export_out = ".";
  CLI::App* export_cmd =
      app.add_subcommand("export", "Write plot CSVs from a report");
  export_cmd->add_option("--report", export_report, "report.json")->required();
  export_cmd->add_option("--out", export_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (generate->parsed()) return RunGenerate(gen_spec, gen_seed, gen_out);
  if (select->parsed()) return RunSelect(select_args, select_flags);
  if (simulate->parsed()) return RunSimulate(sim_args, sim_flags);
  if (evaluate->parsed()) return RunEvaluate(eval_args, eval_flags);
  if (experiment->parsed()) return RunExperimentCommand(exp_args, exp_flags);
  if (export_cmd->parsed()) return RunExport(export_report, export_out);
  return kExitConfig;
}

}  // namespace
}  // namespace fairvax

int main(int argc, char** argv) { return fairvax::Main(argc, argv); }
