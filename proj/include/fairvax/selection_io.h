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

#ifndef FAIRVAX_SELECTION_IO_H_
#define FAIRVAX_SELECTION_IO_H_

#include <filesystem>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairvax/disease_model.h"
#include "fairvax/im_selector.h"
#include "fairvax/mobility_network.h"
#include "json.hpp"

namespace fairvax {

// {strategy, V: [CBG ids], budget, budget_used, per_group_used: {race, income},
//  group_budgets?, gain_trace: [{cbg, normalized_gain, marginal_gain}],
//  evaluation_count, warnings}
nlohmann::json SelectionToJson(const SelectionResult& selection,
                               const MobilityNetwork& network);

// Reads the fields written by SelectionToJson; CBG ids are mapped back to
// indices of `network`.
absl::StatusOr<SelectionResult> SelectionFromJson(
    const nlohmann::json& json, const MobilityNetwork& network);

nlohmann::json SimulationResultToJson(const SimulationResult& result,
                                      const MobilityNetwork& network,
                                      bool per_cbg);

// Writes to a temporary sibling and renames it into place.
absl::Status WriteJsonFile(const std::filesystem::path& path,
                           const nlohmann::json& json);
absl::StatusOr<nlohmann::json> ReadJsonFile(const std::filesystem::path& path);

}  // namespace fairvax

#endif  // FAIRVAX_SELECTION_IO_H_
