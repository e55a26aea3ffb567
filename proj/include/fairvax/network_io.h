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

#ifndef FAIRVAX_NETWORK_IO_H_
#define FAIRVAX_NETWORK_IO_H_

#include <filesystem>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairvax/mobility_network.h"

namespace fairvax {

inline constexpr char kCbgFileName[] = "cbgs.csv";
inline constexpr char kPoiFileName[] = "pois.csv";
inline constexpr char kVisitFileName[] = "visits.csv";

// Reads the three CSV files:
//   cbgs.csv    id,population,median_income,median_age,race_frac_1,...
//   pois.csv    id,area_sqft,dwell_fraction
//   visits.csv  hour,cbg_id,poi_id,weight      (hour is 0-based)
// Race group labels are the suffixes of the race_frac_ columns. Errors name
// the file, the 1-based line and the column.
absl::StatusOr<MobilityNetwork> LoadNetwork(
    const std::filesystem::path& cbg_file,
    const std::filesystem::path& poi_file,
    const std::filesystem::path& visits_file);

// Loads <dir>/cbgs.csv, <dir>/pois.csv and <dir>/visits.csv.
absl::StatusOr<MobilityNetwork> LoadNetworkDir(
    const std::filesystem::path& dir);

// Writes the three files into `dir`, creating it if needed. Doubles use the
// shortest representation that round-trips.
absl::Status WriteNetworkDir(const MobilityNetwork& network,
                             const std::filesystem::path& dir);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace fairvax

#endif  // FAIRVAX_NETWORK_IO_H_
