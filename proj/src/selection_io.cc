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

#include "fairvax/selection_io.h"

#include <fstream>
#include <string>
#include <system_error>
#include <utility>

#include "absl/strings/str_cat.h"

namespace fairvax {

using nlohmann::json;

json SelectionToJson(const SelectionResult& selection,
                     const MobilityNetwork& network) {
  json out;
  out["strategy"] = std::string(StrategyName(selection.strategy));
  json ids = json::array();
  for (int c : selection.selected) ids.push_back(network.cbg(c).id);
  out["V"] = std::move(ids);
  out["budget"] = selection.budget;
  out["budget_used"] = selection.budget_used;
  out["per_group_used"] = {
      {"race", GroupUsage(network, selection.selected, Grouping::kRace)},
      {"income", GroupUsage(network, selection.selected, Grouping::kIncome)},
      {"race_labels", network.race_labels()},
      {"income_labels", network.income_labels()}};
  if (selection.group_budgets) {
    out["group_budgets"] = {
        {"grouping", std::string(GroupingName(selection.group_budgets->grouping))},
        {"budgets", selection.group_budgets->budgets},
        {"consumed", selection.group_budgets->consumed}};
  }
  json trace = json::array();
  for (const GainRecord& g : selection.gain_trace) {
    trace.push_back({{"cbg", network.cbg(g.cbg).id},
                     {"normalized_gain", g.normalized_gain},
                     {"marginal_gain", g.marginal_gain}});
  }
  out["gain_trace"] = std::move(trace);
  out["evaluation_count"] = selection.evaluation_count;
  out["warnings"] = selection.warnings;
  return out;
}

absl::StatusOr<SelectionResult> SelectionFromJson(const json& in,
                                                  const MobilityNetwork& network) {
  SelectionResult s;
  try {
    absl::StatusOr<StrategyKind> kind =
        ParseStrategy(in.at("strategy").get<std::string>());
    if (!kind.ok()) return kind.status();
    s.strategy = *kind;
    for (const json& id : in.at("V")) {
      const int64_t cbg_id = id.get<int64_t>();
      std::optional<int> index = network.IndexOfCbg(cbg_id);
      if (!index) {
        return absl::InvalidArgumentError(
            absl::StrCat("selection references unknown CBG id ", cbg_id));
      }
      s.selected.push_back(*index);
    }
    s.budget = in.value("budget", 0.0);
    s.budget_used = in.value("budget_used", 0.0);
    s.evaluation_count = in.value("evaluation_count", int64_t{0});
    if (in.contains("gain_trace")) {
      for (const json& g : in.at("gain_trace")) {
        std::optional<int> index = network.IndexOfCbg(g.at("cbg").get<int64_t>());
        if (!index) {
          return absl::InvalidArgumentError("gain_trace references unknown CBG");
        }
        s.gain_trace.push_back({*index, g.at("normalized_gain").get<double>(),
                                g.at("marginal_gain").get<double>()});
      }
    }
    if (in.contains("group_budgets")) {
      const json& gb = in.at("group_budgets");
      GroupBudgets budgets;
      budgets.grouping = gb.at("grouping").get<std::string>() == "race"
                             ? Grouping::kRace
                             : Grouping::kIncome;
      budgets.budgets = gb.at("budgets").get<std::vector<double>>();
      budgets.consumed = gb.at("consumed").get<std::vector<double>>();
      s.group_budgets = std::move(budgets);
    }
    if (in.contains("warnings")) {
      s.warnings = in.at("warnings").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed selection JSON: ", e.what()));
  }
  return s;
}

json SimulationResultToJson(const SimulationResult& result,
                            const MobilityNetwork& network, bool per_cbg) {
  json out;
  out["eir_total"] = result.eir_total;
  out["eir_by_race"] = result.eir_by_race;
  out["eir_by_income"] = result.eir_by_income;
  out["vaccinated_total"] = result.vaccinated_total;
  out["horizon_hours"] = result.final_state.hour;
  if (!result.trajectory.empty()) {
    json traj = json::array();
    for (const SeirTotals& t : result.trajectory) {
      traj.push_back({t.s, t.e, t.i, t.r});
    }
    out["trajectory_seir"] = std::move(traj);
  }
  if (per_cbg) {
    const SeirState& st = result.final_state;
    json cbgs = json::array();
    for (int c = 0; c < st.num_cbgs(); ++c) {
      cbgs.push_back({{"id", network.cbg(c).id},
                      {"S", st.s[c]},
                      {"E", st.e[c]},
                      {"I", st.i[c]},
                      {"R", st.r[c]},
                      {"vaccinated", st.vaccinated[c]}});
    }
    out["final_state"] = std::move(cbgs);
  }
  return out;
}

absl::Status WriteJsonFile(const std::filesystem::path& path, const json& j) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
    if (!out) {
      return absl::InternalError(absl::StrCat("cannot write ", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    return absl::InternalError(absl::StrCat("cannot rename ", tmp.string(),
                                            ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<json> ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": invalid JSON: ", e.what()));
  }
}

}  // namespace fairvax
