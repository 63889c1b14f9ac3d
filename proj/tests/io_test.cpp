// Copyright 2026 The corrfb Authors
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

#include "corrfb/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace corrfb;

TEST(format_number, shortest_round_trip) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
  EXPECT_EQ(format_number(0.11448312051775406), "0.114483120518");
  EXPECT_EQ(format_number(-0.25), "-0.25");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(rounded(0.9413333333333334), 0.941333333333);
}

TEST(json, noise_model_round_trip) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = gen::random_model(1 + trial % 4, rng);
    auto text = noise_model_to_json(m).dump();
    EXPECT_EQ(noise_model_from_json(json::parse(text)), m);
  }
}

TEST(json, noise_model_errors) {
  EXPECT_THROW(noise_model_from_json(json::parse(R"({"weights": {"I": 1}})")), InputError);
  EXPECT_THROW(noise_model_from_json(json::parse(R"({"n": 0, "weights": {}})")), InputError);
  EXPECT_THROW(noise_model_from_json(json::parse(R"({"n": 1, "weights": {"I": "x"}})")),
               InputError);
  EXPECT_THROW(noise_model_from_json(json::parse(R"({"n": 1, "weights": {"Q": 1}})")),
               InputError);
  EXPECT_THROW(noise_model_from_json(json::parse(R"({"n": 1, "weights": {"I": 0.4}})")),
               InputError);
  auto m = noise_model_from_json(json::parse(R"({"n": 2, "weights": {"XX": 0.25, "II": 0.75}})"));
  EXPECT_EQ(m.weight(PauliString::parse("XX")), 0.25);
}

TEST(json, strategy_round_trip) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    auto s = gen::random_recovery(gen::random_partition(n, rng), rng, trial % 2 == 0);
    EXPECT_EQ(strategy_from_json(json::parse(strategy_to_json(s).dump())), s);
  }
  EXPECT_THROW(strategy_from_json(json::parse(R"({"outcomes": {}})")), InputError);
  EXPECT_THROW(strategy_from_json(json::parse(R"({"outcomes": {"I": {"II": 1}, "X": {"X": 1}}})")),
               InputError);
}

TEST(json, report_fields) {
  auto j = report_to_json(theoretical_fidelity({0.4, 0.2, 2}));
  EXPECT_EQ(j["total"], 0.6);
  EXPECT_EQ(j["region"], "A");
  EXPECT_EQ(j["thresholds"]["mu_AB"], 0.318181818182);
  EXPECT_TRUE(j["thresholds"]["mu_BC"].is_null());
  EXPECT_EQ(j["non_paper_form"], false);
  EXPECT_EQ(j["strategy"]["outcomes"]["X"]["XI"], 1.0);

  auto none = report_to_json(optimize_recovery(uncorrelated(0.1, 1), MeasurementPartition::full(1)));
  EXPECT_TRUE(none["region"].is_null());
  EXPECT_TRUE(none["thresholds"]["mu_AB"].is_null());
}

TEST(json, read_file_errors) {
  EXPECT_THROW(read_json_file("/nonexistent/corrfb.json"), InputError);
  const std::string path = ::testing::TempDir() + "corrfb_bad.json";
  std::ofstream(path) << "{not json";
  EXPECT_THROW(read_json_file(path), InputError);
  std::remove(path.c_str());
}
