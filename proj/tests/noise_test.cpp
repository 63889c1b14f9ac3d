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

#include "corrfb/noise.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace corrfb;

namespace {

PauliString ps(const char* s) { return PauliString::parse(s); }

}  // namespace

TEST(noise, single_qubit_depolarizing) {
  auto zero = single_qubit_depolarizing(0.0);
  EXPECT_EQ(zero.support_size(), 1u);
  EXPECT_EQ(zero.weight(ps("I")), 1.0);

  auto m = single_qubit_depolarizing(0.3);
  EXPECT_DOUBLE_EQ(m.weight(ps("I")), 0.7);
  EXPECT_DOUBLE_EQ(m.weight(ps("X")), 0.1);
  EXPECT_DOUBLE_EQ(m.weight(ps("Y")), 0.1);
  EXPECT_DOUBLE_EQ(m.weight(ps("Z")), 0.1);

  auto full = single_qubit_depolarizing(0.75);
  for (PauliIndex a : kAllPaulis) EXPECT_DOUBLE_EQ(full.weight(PauliString{a}), 0.25);

  EXPECT_THROW(single_qubit_depolarizing(-0.1), InputError);
  EXPECT_THROW(single_qubit_depolarizing(1.5), InputError);
}

TEST(noise, uncorrelated) {
  auto m = uncorrelated(0.3, 2);
  EXPECT_EQ(m.support_size(), 16u);
  EXPECT_NEAR(m.weight(ps("II")), 0.49, 1e-15);
  EXPECT_NEAR(m.weight(ps("XY")), 0.01, 1e-15);
  EXPECT_NEAR(m.total_weight(), 1.0, 1e-14);
  EXPECT_THROW(uncorrelated(0.3, 9), ResourceError);
  EXPECT_NO_THROW(uncorrelated(0.3, 9, 9));
}

TEST(noise, uncorrelated_single_qubit_marginals) {
  for (double p : {0.0, 0.1, 0.45, 0.75, 1.0}) {
    auto m = uncorrelated(p, 3);
    auto expected = single_qubit_depolarizing(p);
    for (std::size_t q = 0; q < 3; ++q) {
      std::vector<std::size_t> qubit{q};
      auto marginal = m.marginal(qubit);
      for (PauliIndex a : kAllPaulis) {
        EXPECT_NEAR(marginal.weight(PauliString{a}), expected.weight(PauliString{a}), 1e-15);
      }
    }
  }
}

TEST(noise, fully_correlated) {
  auto m = fully_correlated(0.3, 3);
  EXPECT_EQ(m.support_size(), 4u);
  EXPECT_DOUBLE_EQ(m.weight(ps("XXX")), 0.1);
  EXPECT_EQ(m.weight(ps("XIX")), 0.0);
  auto clean = fully_correlated(0.0, 5);
  EXPECT_EQ(clean.support_size(), 1u);
  EXPECT_EQ(clean.weight(PauliString::identity(5)), 1.0);
  // No 4^n expansion, so large n is fine.
  EXPECT_EQ(fully_correlated(0.2, 40).support_size(), 4u);
}

TEST(noise, convex_mixture_endpoints) {
  for (std::size_t n : {1u, 2u, 3u}) {
    for (double p : {0.0, 0.3, 0.8}) {
      EXPECT_EQ(convex_mixture({p, 0.0, n}), uncorrelated(p, n));
      EXPECT_EQ(convex_mixture({p, 1.0, n}), fully_correlated(p, n));
    }
  }
}

TEST(noise, convex_mixture_value) {
  auto m = convex_mixture({0.3, 0.5, 2});
  EXPECT_NEAR(m.weight(ps("XX")), 0.055, 1e-15);
  EXPECT_THROW(convex_mixture({0.3, 1.2, 2}), InputError);
  EXPECT_THROW(convex_mixture({0.3, 0.5, 0}), InputError);
}

TEST(noise, convex_mixture_is_pointwise_mixture) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = unit(rng), mu = unit(rng);
    const std::size_t n = 1 + trial % 3;
    auto mix = convex_mixture({p, mu, n});
    auto uc = uncorrelated(p, n);
    auto cc = fully_correlated(p, n);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << (2 * n)); ++k) {
      auto s = PauliString::from_index(k, n);
      EXPECT_NEAR(mix.weight(s), (1 - mu) * uc.weight(s) + mu * cc.weight(s), 1e-14);
    }
    EXPECT_NEAR(mix.total_weight(), 1.0, 1e-12);
  }
}

TEST(noise, from_table) {
  auto id = NoiseModel::from_table(2, {{ps("II"), 1.0}});
  EXPECT_EQ(id.weight(ps("II")), 1.0);

  EXPECT_THROW(NoiseModel::from_table(2, {{ps("II"), 0.5}, {ps("XX"), 0.6}}), InputError);

  auto two = NoiseModel::from_table(2, {{ps("ZI"), 0.5}, {ps("IX"), 0.5}});
  EXPECT_EQ(two.support_size(), 2u);
  EXPECT_EQ(two.entries()[0].first.str(), "IX");

  EXPECT_THROW(NoiseModel::from_table(2, {{ps("II"), 0.5}, {ps("II"), 0.5}}), InputError);
  EXPECT_THROW(NoiseModel::from_table(2, {{ps("III"), 1.0}}), InputError);
  EXPECT_THROW(NoiseModel::from_table(1, {{ps("I"), 1.5}, {ps("X"), -0.5}}), InputError);
  // Within the input tolerance, never renormalized.
  auto close = NoiseModel::from_table(1, {{ps("I"), 0.5}, {ps("X"), 0.5 + 5e-10}});
  EXPECT_EQ(close.weight(ps("X")), 0.5 + 5e-10);
  EXPECT_THROW(NoiseModel::from_table(1, {{ps("I"), 0.5}, {ps("X"), 0.5 + 5e-9}}), InputError);
}

TEST(noise, zero_weights_are_not_stored) {
  auto m = NoiseModel::from_table(1, {{ps("I"), 1.0}, {ps("Z"), 0.0}});
  EXPECT_EQ(m.support_size(), 1u);
  EXPECT_EQ(m.weight(ps("Z")), 0.0);
}
