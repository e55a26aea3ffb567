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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "fairvax/config.h"
#include "fairvax/network_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fairvax {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double IncomeRaceCorrelation(const MobilityNetwork& net) {
  std::vector<double> group, lead;
  for (const Cbg& c : net.cbgs()) {
    group.push_back(c.income_group);
    lead.push_back(c.racial_fractions[0]);
  }
  return Pearson(group, lead);
}

TEST(SyntheticTest, SameSeedGivesByteIdenticalFiles) {
  SyntheticSpec spec;
  spec.num_cbgs = 200;
  spec.num_pois = 500;
  spec.horizon_hours = 840;
  const fs::path root = fs::path(::testing::TempDir()) / "synthetic_det";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, 7);
    ASSERT_TRUE(net.ok()) << net.status();
    ASSERT_TRUE(WriteNetworkDir(*net, root / run).ok());
  }
  for (const char* file : {kCbgFileName, kPoiFileName, kVisitFileName}) {
    const std::string a = Slurp(root / "a" / file);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, Slurp(root / "b" / file)) << file;
  }
}

TEST(SyntheticTest, DifferentSeedsDiffer) {
  SyntheticSpec spec;
  spec.num_cbgs = 20;
  spec.num_pois = 30;
  spec.horizon_hours = 24;
  absl::StatusOr<MobilityNetwork> a = GenerateSynthetic(spec, 1);
  absl::StatusOr<MobilityNetwork> b = GenerateSynthetic(spec, 2);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_NE(a->cbg(0).population == b->cbg(0).population &&
                a->cbg(1).median_income == b->cbg(1).median_income &&
                a->visits() == b->visits(),
            true);
}

TEST(SyntheticTest, SegregatedModeCorrelatesRaceWithIncome) {
  SyntheticSpec spec;
  spec.mixing = RaceMixing::kSegregated;
  spec.horizon_hours = 1;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, seed);
    ASSERT_TRUE(net.ok());
    EXPECT_GT(IncomeRaceCorrelation(*net), 0.5) << "seed " << seed;
  }
}

TEST(SyntheticTest, MixedModeHasWeakCorrelation) {
  SyntheticSpec spec;
  spec.mixing = RaceMixing::kMixed;
  spec.horizon_hours = 1;
  absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, 3);
  ASSERT_TRUE(net.ok());
  EXPECT_LT(std::abs(IncomeRaceCorrelation(*net)), 0.3);
}

TEST(SyntheticTest, SatisfiesNetworkInvariants) {
  SyntheticSpec spec;
  spec.num_cbgs = 40;
  spec.num_pois = 60;
  spec.horizon_hours = 168;
  absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, 9);
  ASSERT_TRUE(net.ok());
  EXPECT_EQ(net->num_cbgs(), 40);
  EXPECT_EQ(net->num_pois(), 60);
  EXPECT_EQ(net->visits().horizon(), 168);
  EXPECT_GT(net->visits().num_entries(), 0u);
  std::vector<int> per_group(4, 0);
  for (const Cbg& c : net->cbgs()) {
    double sum = 0;
    for (double a : c.racial_fractions) sum += a;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_GE(c.population, spec.min_population);
    EXPECT_LE(c.population, spec.max_population);
    ++per_group[c.income_group - 1];
  }
  EXPECT_THAT(per_group, ::testing::Each(10));
  for (Grouping g : {Grouping::kRace, Grouping::kIncome}) {
    const auto& n = net->group_populations(g);
    EXPECT_NEAR(std::accumulate(n.begin(), n.end(), 0.0),
                static_cast<double>(net->total_population()), 1e-6);
  }
}

TEST(SyntheticTest, SingleCbgNetworkIsValid) {
  SyntheticSpec spec;
  spec.num_cbgs = 1;
  spec.num_pois = 3;
  spec.horizon_hours = 24;
  absl::StatusOr<MobilityNetwork> net = GenerateSynthetic(spec, 1);
  ASSERT_TRUE(net.ok()) << net.status();
  EXPECT_EQ(net->num_cbgs(), 1);
}

TEST(SyntheticTest, RejectsNonpositiveSizes) {
  for (auto mutate : {+[](SyntheticSpec& s) { s.num_cbgs = 0; },
                      +[](SyntheticSpec& s) { s.num_pois = -1; },
                      +[](SyntheticSpec& s) { s.num_race_groups = 0; },
                      +[](SyntheticSpec& s) { s.horizon_hours = 0; },
                      +[](SyntheticSpec& s) { s.min_population = 0; }}) {
    SyntheticSpec spec;
    mutate(spec);
    EXPECT_EQ(GenerateSynthetic(spec, 1).status().code(),
              absl::StatusCode::kInvalidArgument);
  }
}

TEST(SyntheticSpecTest, ParsesKeysAndRejectsUnknown) {
  absl::StatusOr<KeyValueConfig> config = KeyValueConfig::Parse(
      "num_cbgs = 12\nmixing = \"mixed\"\nsegregation = 0.1\n");
  ASSERT_TRUE(config.ok());
  absl::StatusOr<SyntheticSpec> spec = ParseSyntheticSpec(*config);
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->num_cbgs, 12);
  EXPECT_EQ(spec->mixing, RaceMixing::kMixed);
  EXPECT_EQ(spec->segregation, 0.1);
  EXPECT_EQ(spec->num_pois, SyntheticSpec().num_pois);

  config = KeyValueConfig::Parse("num_cbg = 12\n");
  ASSERT_TRUE(config.ok());
  EXPECT_FALSE(ParseSyntheticSpec(*config).ok());
  config = KeyValueConfig::Parse("mixing = \"blended\"\n");
  ASSERT_TRUE(config.ok());
  EXPECT_FALSE(ParseSyntheticSpec(*config).ok());
}

}  // namespace
}  // namespace fairvax
