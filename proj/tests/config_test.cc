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

#include "fairvax/config.h"

#include <filesystem>
#include <fstream>

#include "fairvax/disease_model.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fairvax {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;

TEST(KeyValueConfigTest, ParsesScalarsCommentsAndQuotes) {
  absl::StatusOr<KeyValueConfig> c = KeyValueConfig::Parse(R"(
# leading comment
beta_home = 0.03   # trailing comment
name = "a # not a comment"
flag = true
count = 12
synthetic.num_cbgs = 50
)");
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(*c->GetDouble("beta_home", 0), 0.03);
  EXPECT_EQ(c->GetString("name", ""), "a # not a comment");
  EXPECT_TRUE(*c->GetBool("flag", false));
  EXPECT_EQ(*c->GetInt("count", 0), 12);
  EXPECT_EQ(*c->GetInt("missing", 4), 4);
  EXPECT_TRUE(c->Has("synthetic.num_cbgs"));
  EXPECT_EQ(*c->WithPrefix("synthetic.").GetInt("num_cbgs", 0), 50);
  EXPECT_FALSE(c->WithPrefix("synthetic.").Has("count"));
}

TEST(KeyValueConfigTest, ParsesLists) {
  absl::StatusOr<KeyValueConfig> c =
      KeyValueConfig::Parse("a = [\"im\", \"rand\"]\nb = cs, im-r\nc = []\n");
  ASSERT_TRUE(c.ok());
  EXPECT_THAT(c->GetList("a"), ElementsAre("im", "rand"));
  EXPECT_THAT(c->GetList("b"), ElementsAre("cs", "im-r"));
  EXPECT_TRUE(c->GetList("c").empty());
  EXPECT_TRUE(c->GetList("d").empty());
}

TEST(KeyValueConfigTest, ReportsMalformedLines) {
  EXPECT_THAT(std::string(KeyValueConfig::Parse("ok = 1\nnot a pair\n")
                              .status()
                              .message()),
              HasSubstr("line 2"));
  EXPECT_FALSE(KeyValueConfig::Parse("= 3\n").ok());
  EXPECT_FALSE(KeyValueConfig::Parse("k = [1, 2\n").ok());
}

TEST(KeyValueConfigTest, TypedGettersRejectBadValues) {
  absl::StatusOr<KeyValueConfig> c =
      KeyValueConfig::Parse("x = abc\ny = 1.5\nz = maybe\n");
  ASSERT_TRUE(c.ok());
  EXPECT_FALSE(c->GetDouble("x", 0).ok());
  EXPECT_FALSE(c->GetInt("y", 0).ok());
  EXPECT_FALSE(c->GetBool("z", false).ok());
}

TEST(KeyValueConfigTest, SetOverridesFileValues) {
  absl::StatusOr<KeyValueConfig> c = KeyValueConfig::Parse("psi = 10\n");
  ASSERT_TRUE(c.ok());
  c->Set("psi", "20");
  EXPECT_EQ(*c->GetDouble("psi", 0), 20);
}

TEST(KeyValueConfigTest, CheckKnownKeys) {
  absl::StatusOr<KeyValueConfig> c = KeyValueConfig::Parse("a = 1\nb = 2\n");
  ASSERT_TRUE(c.ok());
  EXPECT_TRUE(c->CheckKnownKeys({"a", "b", "c"}).ok());
  EXPECT_THAT(std::string(c->CheckKnownKeys({"a"}).message()), HasSubstr("'b'"));
}

TEST(KeyValueConfigTest, LoadMissingFileIsNotFound) {
  EXPECT_EQ(KeyValueConfig::Load("/nonexistent/params.toml").status().code(),
            absl::StatusCode::kNotFound);
}

TEST(KeyValueConfigTest, LoadReadsFile) {
  const auto path = std::filesystem::path(::testing::TempDir()) / "p.toml";
  std::ofstream(path) << "p0 = 0.01\n";
  absl::StatusOr<KeyValueConfig> c = KeyValueConfig::Load(path);
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*c->GetDouble("p0", 0), 0.01);
}

TEST(DiseaseParamsTest, DefaultsAndOverrides) {
  absl::StatusOr<DiseaseParams> p = ParseDiseaseParams(KeyValueConfig());
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->beta_home, 0.02);
  EXPECT_EQ(p->psi, 300);
  EXPECT_EQ(p->p0, 0.001);
  EXPECT_EQ(p->delta_e_hours, 96);
  EXPECT_EQ(p->delta_i_hours, 84);

  absl::StatusOr<KeyValueConfig> c =
      KeyValueConfig::Parse("psi = 150\ndelta_i_hours = 1\nunrelated = x\n");
  ASSERT_TRUE(c.ok());
  p = ParseDiseaseParams(*c);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->psi, 150);
  EXPECT_EQ(p->delta_i_hours, 1);
}

TEST(DiseaseParamsTest, RejectsOutOfRangeValues) {
  for (const char* text : {"p0 = 0", "p0 = 1.5", "delta_e_hours = 0.5",
                           "delta_i_hours = 0", "beta_home = -1", "psi = -2"}) {
    absl::StatusOr<KeyValueConfig> c = KeyValueConfig::Parse(text);
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(ParseDiseaseParams(*c).status().code(),
              absl::StatusCode::kInvalidArgument)
        << text;
  }
}

}  // namespace
}  // namespace fairvax
