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

#include "fairvax/network_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>
#include <utility>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "fairvax/status_macros.h"

namespace fairvax {
namespace {

namespace fs = std::filesystem;

// Numeric-only CSV: no quoting, comma separated, first line is the header.
class CsvReader {
 public:
  static absl::StatusOr<CsvReader> Open(const fs::path& path) {
    CsvReader r;
    r.name_ = path.filename().string();
    r.in_.open(path);
    if (!r.in_) {
      return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
    }
    std::string header;
    if (!std::getline(r.in_, header)) {
      return absl::InvalidArgumentError(
          absl::StrCat(r.name_, ": missing header line"));
    }
    r.line_no_ = 1;
    r.header_ = Split(header);
    return r;
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::string& name() const { return name_; }
  int line_no() const { return line_no_; }

  // Returns false at end of file. Blank lines are skipped.
  bool Next(std::vector<std::string>* fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (absl::StripAsciiWhitespace(line).empty()) continue;
      *fields = Split(line);
      return true;
    }
    return false;
  }

  absl::Status Error(absl::string_view column, absl::string_view what) const {
    return absl::InvalidArgumentError(absl::StrCat(
        name_, " line ", line_no_, ", column '", column, "': ", what));
  }

  absl::Status ExpectHeader(const std::vector<std::string>& expected) const {
    if (header_ != expected) {
      return absl::InvalidArgumentError(
          absl::StrCat(name_, ": header must be '",
                       absl::StrJoin(expected, ","), "', got '",
                       absl::StrJoin(header_, ","), "'"));
    }
    return absl::OkStatus();
  }

  absl::Status CheckWidth(const std::vector<std::string>& fields) const {
    if (fields.size() != header_.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(name_, " line ", line_no_, ": expected ",
                       header_.size(), " columns, got ", fields.size()));
    }
    return absl::OkStatus();
  }

  absl::StatusOr<int64_t> Int(const std::vector<std::string>& fields,
                              size_t col) const {
    int64_t v = 0;
    if (!absl::SimpleAtoi(fields[col], &v)) {
      return Error(header_[col],
                   absl::StrCat("not an integer: '", fields[col], "'"));
    }
    return v;
  }

  absl::StatusOr<double> Double(const std::vector<std::string>& fields,
                                size_t col) const {
    double v = 0;
    if (!absl::SimpleAtod(fields[col], &v) || !std::isfinite(v)) {
      return Error(header_[col],
                   absl::StrCat("not a finite number: '", fields[col], "'"));
    }
    return v;
  }

 private:
  static std::vector<std::string> Split(absl::string_view line) {
    std::vector<std::string> out;
    for (absl::string_view f : absl::StrSplit(line, ',')) {
      out.emplace_back(absl::StripAsciiWhitespace(f));
    }
    return out;
  }

  std::string name_;
  std::ifstream in_;
  int line_no_ = 0;
  std::vector<std::string> header_;
};

absl::StatusOr<std::vector<Cbg>> ReadCbgs(const fs::path& path,
                                          std::vector<std::string>* labels) {
  ASSIGN_OR_RETURN(CsvReader reader, CsvReader::Open(path));
  const std::vector<std::string>& header = reader.header();
  const std::vector<std::string> fixed = {"id", "population", "median_income",
                                          "median_age"};
  if (header.size() < fixed.size() + 1 ||
      !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    return absl::InvalidArgumentError(absl::StrCat(
        reader.name(),
        ": header must be 'id,population,median_income,median_age,"
        "race_frac_1,...,race_frac_M'"));
  }
  labels->clear();
  for (size_t c = fixed.size(); c < header.size(); ++c) {
    absl::string_view col = header[c];
    if (!absl::ConsumePrefix(&col, "race_frac_") || col.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat(reader.name(), ": unexpected column '", header[c],
                       "', race columns must be named race_frac_<group>"));
    }
    labels->emplace_back(col);
  }

  std::vector<Cbg> cbgs;
  std::vector<std::string> fields;
  while (reader.Next(&fields)) {
    if (absl::Status s = reader.CheckWidth(fields); !s.ok()) return s;
    Cbg c;
    ASSIGN_OR_RETURN(c.id, reader.Int(fields, 0));
    ASSIGN_OR_RETURN(c.population, reader.Int(fields, 1));
    ASSIGN_OR_RETURN(c.median_income, reader.Double(fields, 2));
    ASSIGN_OR_RETURN(c.median_age, reader.Double(fields, 3));
    for (size_t col = fixed.size(); col < header.size(); ++col) {
      ASSIGN_OR_RETURN(double a, reader.Double(fields, col));
      c.racial_fractions.push_back(a);
    }
    if (absl::Status s = ValidateCbg(c, labels->size()); !s.ok()) {
      absl::string_view msg = s.message();
      const size_t colon = msg.find(':');
      std::string column(msg.substr(0, colon));
      if (column == "race_frac") column = "race_frac_*";
      return reader.Error(column, absl::StripLeadingAsciiWhitespace(
                                      msg.substr(colon + 1)));
    }
    cbgs.push_back(std::move(c));
  }
  return cbgs;
}

absl::StatusOr<std::vector<Poi>> ReadPois(const fs::path& path) {
  ASSIGN_OR_RETURN(CsvReader reader, CsvReader::Open(path));
  if (absl::Status s = reader.ExpectHeader({"id", "area_sqft", "dwell_fraction"});
      !s.ok()) {
    return s;
  }
  std::vector<Poi> pois;
  std::vector<std::string> fields;
  while (reader.Next(&fields)) {
    if (absl::Status s = reader.CheckWidth(fields); !s.ok()) return s;
    Poi p;
    ASSIGN_OR_RETURN(p.id, reader.Int(fields, 0));
    ASSIGN_OR_RETURN(p.area_sqft, reader.Double(fields, 1));
    ASSIGN_OR_RETURN(p.dwell_fraction, reader.Double(fields, 2));
    if (absl::Status s = ValidatePoi(p); !s.ok()) {
      absl::string_view msg = s.message();
      const size_t colon = msg.find(':');
      return reader.Error(msg.substr(0, colon), absl::StripLeadingAsciiWhitespace(
                                                    msg.substr(colon + 1)));
    }
    pois.push_back(p);
  }
  return pois;
}

absl::StatusOr<std::vector<VisitTriplet>> ReadVisits(
    const fs::path& path, const std::unordered_map<int64_t, int>& cbg_index,
    const std::unordered_map<int64_t, int>& poi_index) {
  ASSIGN_OR_RETURN(CsvReader reader, CsvReader::Open(path));
  if (absl::Status s = reader.ExpectHeader({"hour", "cbg_id", "poi_id", "weight"});
      !s.ok()) {
    return s;
  }
  std::vector<VisitTriplet> triplets;
  std::vector<std::string> fields;
  while (reader.Next(&fields)) {
    if (absl::Status s = reader.CheckWidth(fields); !s.ok()) return s;
    VisitTriplet t;
    ASSIGN_OR_RETURN(int64_t hour, reader.Int(fields, 0));
    if (hour < 0 || hour > (1 << 30)) {
      return reader.Error("hour", absl::StrCat("out of range: ", hour));
    }
    t.hour = static_cast<int>(hour);
    ASSIGN_OR_RETURN(int64_t cbg_id, reader.Int(fields, 1));
    auto cbg = cbg_index.find(cbg_id);
    if (cbg == cbg_index.end()) {
      return reader.Error("cbg_id", absl::StrCat("unknown CBG id ", cbg_id));
    }
    t.cbg = cbg->second;
    ASSIGN_OR_RETURN(int64_t poi_id, reader.Int(fields, 2));
    auto poi = poi_index.find(poi_id);
    if (poi == poi_index.end()) {
      return reader.Error("poi_id", absl::StrCat("unknown POI id ", poi_id));
    }
    t.poi = poi->second;
    ASSIGN_OR_RETURN(t.weight, reader.Double(fields, 3));
    if (t.weight < 0) {
      return reader.Error("weight",
                          absl::StrCat("must be >= 0, got ", t.weight));
    }
    triplets.push_back(t);
  }
  return triplets;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

absl::StatusOr<MobilityNetwork> LoadNetwork(const fs::path& cbg_file,
                                            const fs::path& poi_file,
                                            const fs::path& visits_file) {
  std::vector<std::string> labels;
  ASSIGN_OR_RETURN(std::vector<Cbg> cbgs, ReadCbgs(cbg_file, &labels));
  ASSIGN_OR_RETURN(std::vector<Poi> pois, ReadPois(poi_file));

  std::unordered_map<int64_t, int> cbg_index, poi_index;
  for (size_t i = 0; i < cbgs.size(); ++i) {
    if (!cbg_index.emplace(cbgs[i].id, static_cast<int>(i)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          cbg_file.filename().string(), ": duplicate CBG id ", cbgs[i].id));
    }
  }
  for (size_t p = 0; p < pois.size(); ++p) {
    if (!poi_index.emplace(pois[p].id, static_cast<int>(p)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          poi_file.filename().string(), ": duplicate POI id ", pois[p].id));
    }
  }
  ASSIGN_OR_RETURN(std::vector<VisitTriplet> triplets,
                   ReadVisits(visits_file, cbg_index, poi_index));
  return MobilityNetwork::Create(std::move(cbgs), std::move(pois),
                                 VisitMatrix::FromTriplets(0, std::move(triplets)),
                                 std::move(labels));
}

absl::StatusOr<MobilityNetwork> LoadNetworkDir(const fs::path& dir) {
  return LoadNetwork(dir / kCbgFileName, dir / kPoiFileName,
                     dir / kVisitFileName);
}

absl::Status WriteNetworkDir(const MobilityNetwork& network,
                             const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }

  std::ofstream cbgs(dir / kCbgFileName);
  cbgs << "id,population,median_income,median_age";
  for (const std::string& label : network.race_labels()) {
    cbgs << ",race_frac_" << label;
  }
  cbgs << '\n';
  for (const Cbg& c : network.cbgs()) {
    cbgs << c.id << ',' << c.population << ',' << FormatDouble(c.median_income)
         << ',' << FormatDouble(c.median_age);
    for (double a : c.racial_fractions) cbgs << ',' << FormatDouble(a);
    cbgs << '\n';
  }

  std::ofstream pois(dir / kPoiFileName);
  pois << "id,area_sqft,dwell_fraction\n";
  for (const Poi& p : network.pois()) {
    pois << p.id << ',' << FormatDouble(p.area_sqft) << ','
         << FormatDouble(p.dwell_fraction) << '\n';
  }

  std::ofstream visits(dir / kVisitFileName);
  visits << "hour,cbg_id,poi_id,weight\n";
  const VisitMatrix& m = network.visits();
  for (int t = 0; t < m.horizon(); ++t) {
    for (const Visit& v : m.AtHour(t)) {
      visits << t << ',' << network.cbg(v.cbg).id << ','
             << network.pois()[v.poi].id << ',' << FormatDouble(v.weight)
             << '\n';
    }
  }
  if (!cbgs || !pois || !visits) {
    return absl::InternalError(
        absl::StrCat("failed writing network files to ", dir.string()));
  }
  return absl::OkStatus();
}

}  // namespace fairvax
