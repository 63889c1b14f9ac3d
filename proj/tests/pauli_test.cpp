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

#include "corrfb/pauli.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace corrfb;

namespace {

PauliString random_string(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << (2 * n)) - 1);
  return PauliString::from_index(d(rng), n);
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(pauli_string, parse_and_str) {
  auto s = PauliString::parse("XIZY");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], PauliIndex::X);
  EXPECT_EQ(s[1], PauliIndex::I);
  EXPECT_EQ(s[2], PauliIndex::Z);
  EXPECT_EQ(s[3], PauliIndex::Y);
  EXPECT_EQ(s.str(), "XIZY");
  EXPECT_EQ(s.weight(), 3u);
  EXPECT_THROW(PauliString::parse(""), InputError);
  EXPECT_THROW(PauliString::parse("XQ"), InputError);
  EXPECT_THROW(PauliString::identity(0), InputError);
}

TEST(pauli_string, ordering_follows_index_order) {
  EXPECT_LT(PauliString::parse("IZ"), PauliString::parse("XI"));
  EXPECT_LT(PauliString::parse("XX"), PauliString::parse("XY"));
  EXPECT_LT(PauliString::parse("YZ"), PauliString::parse("ZI"));
  for (std::uint64_t k = 0; k + 1 < 64; ++k) {
    EXPECT_LT(PauliString::from_index(k, 3), PauliString::from_index(k + 1, 3));
    EXPECT_EQ(PauliString::from_index(k, 3).to_index(), k);
  }
}

TEST(pauli_string, restriction) {
  auto s = PauliString::parse("XYZI");
  std::vector<std::size_t> q{0, 2};
  EXPECT_EQ(s.restrict_to(q).str(), "XZ");
  EXPECT_TRUE(s.matches_on(q, PauliString::parse("XZ")));
  EXPECT_FALSE(s.matches_on(q, PauliString::parse("XI")));
  std::vector<std::size_t> bad{7};
  EXPECT_THROW(s.restrict_to(bad), InputError);
}

TEST(pauli_multiply, examples) {
  auto xx = multiply(PauliString::parse("X"), PauliString::parse("X"));
  EXPECT_EQ(xx.pauli.str(), "I");
  EXPECT_EQ(xx.phase_exponent, 0);

  auto xy = multiply(PauliString::parse("X"), PauliString::parse("Y"));
  EXPECT_EQ(xy.pauli.str(), "Z");
  EXPECT_EQ(xy.phase_exponent, 1);

  auto two = multiply(PauliString::parse("XZ"), PauliString::parse("YZ"));
  EXPECT_EQ(two.pauli.str(), "ZI");
  EXPECT_EQ(two.phase_exponent, 1);

  auto yx = multiply(PauliString::parse("Y"), PauliString::parse("X"));
  EXPECT_EQ(yx.pauli.str(), "Z");
  EXPECT_EQ(yx.phase_exponent, 3);

  EXPECT_THROW(multiply(PauliString::parse("X"), PauliString::parse("XX")), InputError);
}

TEST(pauli_multiply, single_qubit_table_matches_matrices) {
  for (PauliIndex a : kAllPaulis) {
    for (PauliIndex b : kAllPaulis) {
      auto r = multiply(PauliString{a}, PauliString{b});
      Eigen::MatrixXcd expected = pauli_matrix(a) * pauli_matrix(b);
      EXPECT_LT(max_abs_diff(to_dense(r), expected), 1e-15);
    }
  }
}

TEST(pauli_multiply, group_closure_and_identities) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 8;
    auto a = random_string(rng, n), b = random_string(rng, n), c = random_string(rng, n);
    auto ab = multiply(a, b);
    EXPECT_EQ(ab.pauli.size(), n);
    EXPECT_LT(ab.phase_exponent, 4);

    auto aa = multiply(a, a);
    EXPECT_TRUE(aa.pauli.is_identity());
    EXPECT_EQ(aa.phase_exponent, 0);

    auto id = multiply(PauliString::identity(n), a);
    EXPECT_EQ(id.pauli, a);
    EXPECT_EQ(id.phase_exponent, 0);

    auto left = multiply(multiply(PhasedPauli{a, 0}, PhasedPauli{b, 0}), PhasedPauli{c, 0});
    auto right = multiply(PhasedPauli{a, 0}, multiply(PhasedPauli{b, 0}, PhasedPauli{c, 0}));
    EXPECT_EQ(left, right);
  }
}

TEST(pauli_multiply, homomorphism_into_dense_matrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::uniform_int_distribution<int> ph(0, 3);
    PhasedPauli a{random_string(rng, n), static_cast<std::uint8_t>(ph(rng))};
    PhasedPauli b{random_string(rng, n), static_cast<std::uint8_t>(ph(rng))};
    Eigen::MatrixXcd prod = to_dense(a) * to_dense(b);
    EXPECT_LE(max_abs_diff(to_dense(multiply(a, b)), prod), 1e-14);
  }
}

TEST(pauli_trace_rule, examples) {
  EXPECT_EQ(trace_rule(PauliString::parse("II"), PauliString::parse("II")), 16.0);
  EXPECT_EQ(trace_rule(PauliString::parse("XI"), PauliString::parse("XI")), 16.0);
  EXPECT_EQ(trace_rule(PauliString::parse("XI"), PauliString::parse("YI")), 0.0);
  EXPECT_THROW(trace_rule(PauliString::parse("X"), PauliString::parse("XI")), InputError);
}

TEST(pauli_trace_rule, agrees_with_dense_trace) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    auto a = random_string(rng, n);
    auto b = trial % 3 == 0 ? a : random_string(rng, n);
    const double dense = std::norm(to_dense(multiply(a, b)).trace());
    EXPECT_NEAR(trace_rule(a, b), dense, 1e-10);
  }
}

TEST(pauli_to_dense, examples) {
  EXPECT_LT(max_abs_diff(to_dense(PauliString::parse("I")), Eigen::MatrixXcd::Identity(2, 2)),
            1e-15);
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_LT(max_abs_diff(to_dense(PauliString::parse("Z")), z), 1e-15);
  Eigen::MatrixXcd xx = Eigen::MatrixXcd::Zero(4, 4);
  for (int k = 0; k < 4; ++k) xx(k, 3 - k) = 1.0;
  EXPECT_LT(max_abs_diff(to_dense(PauliString::parse("XX")), xx), 1e-15);
  // Qubit 0 is the most significant factor.
  Eigen::MatrixXcd zi = Eigen::MatrixXcd::Zero(4, 4);
  zi.diagonal() << 1, 1, -1, -1;
  EXPECT_LT(max_abs_diff(to_dense(PauliString::parse("ZI")), zi), 1e-15);
}

TEST(pauli_to_dense, unitary_and_capped) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    PhasedPauli a{random_string(rng, 3), static_cast<std::uint8_t>(trial % 4)};
    Eigen::MatrixXcd m = to_dense(a);
    EXPECT_LT(max_abs_diff(m.adjoint() * m, Eigen::MatrixXcd::Identity(8, 8)), 1e-14);
  }
  EXPECT_THROW(to_dense(PauliString::identity(7)), ResourceError);
  EXPECT_THROW(to_dense(PauliString::identity(3), 2), ResourceError);
}
