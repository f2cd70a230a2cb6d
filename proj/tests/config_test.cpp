// Copyright 2026 The cavitycz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cavitycz/config.hpp"

#include <sstream>

#include "gtest/gtest.h"

using namespace cavitycz;

TEST(ParseConfig, ReadsKeysCommentsAndWhitespace) {
  std::istringstream in("# header\n g0 = 2.5 \n\nkappa_l=0.1  # trailing\n");
  const auto e = parse_config(in, physics_keys());
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e.at("g0"), "2.5");
  EXPECT_EQ(e.at("kappa_l"), "0.1");
}

TEST(ParseConfig, RejectsUnknownKeyWithLineNumber) {
  std::istringstream in("g0=1\nkappa=2\n");
  try {
    parse_config(in, physics_keys());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_NE(msg.find("kappa"), std::string::npos);
  }
}

TEST(ParseConfig, RejectsDuplicatesAndMalformedLines) {
  std::istringstream dup("g0=1\ng0=2\n");
  EXPECT_THROW(parse_config(dup, physics_keys()), ConfigError);
  std::istringstream bare("g0\n");
  EXPECT_THROW(parse_config(bare, physics_keys()), ConfigError);
  std::istringstream empty_key("=3\n");
  EXPECT_THROW(parse_config(empty_key, physics_keys()), ConfigError);
}

TEST(ParseFinite, AcceptsNumbersOnly) {
  EXPECT_EQ(parse_finite("x", " 1e-3 "), 1e-3);
  EXPECT_EQ(parse_finite("x", "-2"), -2.0);
  EXPECT_THROW(parse_finite("x", "abc"), ConfigError);
  EXPECT_THROW(parse_finite("x", "1.5q"), ConfigError);
  EXPECT_THROW(parse_finite("x", ""), ConfigError);
  EXPECT_THROW(parse_finite("x", "nan"), ConfigError);
  EXPECT_THROW(parse_finite("x", "inf"), ConfigError);
}

TEST(ParseList, CommaListsAndRanges) {
  EXPECT_EQ(parse_list("k", "1,2.5,3"), (std::vector<double>{1.0, 2.5, 3.0}));
  EXPECT_EQ(parse_list("k", "4"), (std::vector<double>{4.0}));
  const auto r = parse_list("k", "0:0.3:0.1");
  ASSERT_EQ(r.size(), 4u);
  EXPECT_NEAR(r.back(), 0.3, 1e-15);
  EXPECT_EQ(parse_list("k", "2:2:1"), (std::vector<double>{2.0}));
  EXPECT_THROW(parse_list("k", "1:0:1"), ConfigError);
  EXPECT_THROW(parse_list("k", "0:1:0"), ConfigError);
  EXPECT_THROW(parse_list("k", "0:1"), ConfigError);
  EXPECT_THROW(parse_list("k", ""), ConfigError);
}

TEST(PhysicsConfig, RoundTripsThroughText) {
  PhysicsConfig cfg;
  cfg.params.g0 = 3.25;
  cfg.params.kappa_l = 0.125;
  cfg.params.gamma = 0.5;
  cfg.params.T_g = 125.0;
  cfg.params.phi = 1.0 / 3.0;
  cfg.T_f = 12.0;
  cfg.grid.dt = 0.001;
  cfg.grid.window = 10.0;
  const auto back = physics_from_text(to_config_text(cfg));
  EXPECT_EQ(back.params.g0, cfg.params.g0);
  EXPECT_EQ(back.params.kappa_l, cfg.params.kappa_l);
  EXPECT_EQ(back.params.gamma, cfg.params.gamma);
  EXPECT_EQ(back.params.T_g, cfg.params.T_g);
  EXPECT_NEAR(back.params.phi, cfg.params.phi, 1e-12);
  EXPECT_EQ(back.T_f, cfg.T_f);
  EXPECT_EQ(back.grid.dt, cfg.grid.dt);
  EXPECT_EQ(back.grid.window, cfg.grid.window);
  EXPECT_EQ(to_config_text(back), to_config_text(cfg));
}

TEST(FormatNumber, FixedPrecisionAndSpecialValues) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(CsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}
