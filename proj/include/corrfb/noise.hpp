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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "corrfb/errors.hpp"
#include "corrfb/pauli.hpp"

namespace corrfb {

/// Largest n for which constructors expand all 4^n strings.
inline constexpr std::size_t kDefaultEnumerationCap = 8;
/// Accepted deviation of user-supplied tables from unit total weight.
inline constexpr double kTableNormalizationTolerance = 1e-9;
/// Accepted deviation for models built by this library.
inline constexpr double kModelNormalizationTolerance = 1e-12;

/// Depolarizing error rate p, correlation mu and qubit count n.
struct DepolarizingParams {
  double p = 0.0;
  double mu = 0.0;
  std::size_t n = 1;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError("p must lie in [0, 1], got " + std::to_string(p));
    }
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw InputError("mu must lie in [0, 1], got " + std::to_string(mu));
    }
    if (n < 1) {
      throw InputError("n must be at least 1");
    }
  }
};

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("p must lie in [0, 1], got " + std::to_string(p));
  }
}

/// Single-qubit depolarizing weights {1-p, p/3, p/3, p/3} indexed by PauliIndex.
inline std::array<double, 4> depolarizing_weights(double p) {
  check_probability(p);
  const double e = p / 3.0;
  return {1.0 - p, e, e, e};
}

inline void check_enumeration_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError("enumerating 4^" + std::to_string(n) +
                        " Pauli strings exceeds the cap of n <= " + std::to_string(cap));
  }
}

/// Probability distribution over n-qubit Pauli errors.
///
/// Only nonzero weights are stored, sorted by Pauli string. Instances are
/// immutable and always normalized.
class NoiseModel {
 public:
  using Entry = std::pair<PauliString, double>;

  /// Validates a user table: nonnegative, unique keys of length n, total 1
  /// within kTableNormalizationTolerance. Never renormalizes.
  static NoiseModel from_table(std::size_t n, std::vector<Entry> entries) {
    if (n == 0) {
      throw InputError("noise table must act on at least one qubit");
    }
    for (const auto& [s, w] : entries) {
      if (s.size() != n) {
        throw InputError("noise table entry '" + s.str() + "' has length " +
                         std::to_string(s.size()) + ", expected " + std::to_string(n));
      }
      if (!(w >= 0.0 && w <= 1.0)) {
        throw InputError("noise table weight for '" + s.str() + "' outside [0, 1]");
      }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < entries.size(); ++k) {
      if (entries[k].first == entries[k - 1].first) {
        throw InputError("duplicate noise table entry '" + entries[k].first.str() + "'");
      }
    }
    return NoiseModel(n, std::move(entries), kTableNormalizationTolerance);
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t support_size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  double weight(const PauliString& s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, const PauliString& key) { return e.first < key; });
    if (it == entries_.end() || it->first != s) {
      return 0.0;
    }
    return it->second;
  }

  /// Compensated sum, so 4^n small terms still total 1 to ~1 ulp.
  double total_weight() const {
    double t = 0.0, c = 0.0;
    for (const auto& e : entries_) {
      const double y = t + e.second;
      c += std::abs(t) >= std::abs(e.second) ? (t - y) + e.second : (e.second - y) + t;
      t = y;
    }
    return t + c;
  }

  /// Marginal distribution on the given qubits, in the given order.
  NoiseModel marginal(std::span<const std::size_t> qubits) const {
    std::vector<Entry> merged;
    for (const auto& [s, w] : entries_) {
      merged.emplace_back(s.restrict_to(qubits), w);
    }
    std::sort(merged.begin(), merged.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> out;
    for (auto& e : merged) {
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += e.second;
      } else {
        out.push_back(std::move(e));
      }
    }
    return NoiseModel(qubits.size(), std::move(out), kModelNormalizationTolerance);
  }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

  // Internal constructor for already sorted, unique entries.
  static NoiseModel from_sorted(std::size_t n, std::vector<Entry> entries) {
    return NoiseModel(n, std::move(entries), kModelNormalizationTolerance);
  }

 private:
  NoiseModel(std::size_t n, std::vector<Entry> entries, double tolerance) : n_(n) {
    entries_.reserve(entries.size());
    for (auto& e : entries) {
      if (e.second < 0.0) {
        throw InputError("negative weight for '" + e.first.str() + "'");
      }
      if (e.second > 0.0) {
        entries_.push_back(std::move(e));
      }
    }
    double total = total_weight();
    if (std::abs(total - 1.0) > tolerance) {
      throw InputError("noise weights sum to " + std::to_string(total) + ", expected 1");
    }
  }

  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

inline NoiseModel single_qubit_depolarizing(double p) {
  auto w = depolarizing_weights(p);
  std::vector<NoiseModel::Entry> entries;
  for (PauliIndex a : kAllPaulis) {
    entries.emplace_back(PauliString{a}, w[static_cast<int>(a)]);
  }
  return NoiseModel::from_sorted(1, std::move(entries));
}

/// Product-form weight: (1-p)^(identity factors) * (p/3)^(other factors).
/// Evaluated from counts, so equal-count strings get bit-identical weights.
inline double uncorrelated_weight(double p, std::size_t n, std::size_t nontrivial) {
  return std::pow(1.0 - p, static_cast<double>(n - nontrivial)) *
         std::pow(p / 3.0, static_cast<double>(nontrivial));
}

inline NoiseModel uncorrelated(double p, std::size_t n,
                               std::size_t cap = kDefaultEnumerationCap) {
  check_probability(p);
  if (n < 1) {
    throw InputError("n must be at least 1");
  }
  check_enumeration_cap(n, cap);
  std::array<double, 64> by_weight{};
  for (std::size_t k = 0; k <= n; ++k) {
    by_weight[k] = uncorrelated_weight(p, n, k);
  }
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  std::vector<NoiseModel::Entry> entries;
  entries.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    PauliString s = PauliString::from_index(idx, n);
    double w = by_weight[s.weight()];
    entries.emplace_back(std::move(s), w);
  }
  return NoiseModel::from_sorted(n, std::move(entries));
}

inline NoiseModel fully_correlated(double p, std::size_t n) {
  auto w = depolarizing_weights(p);
  if (n < 1) {
    throw InputError("n must be at least 1");
  }
  std::vector<NoiseModel::Entry> entries;
  for (PauliIndex a : kAllPaulis) {
    entries.emplace_back(PauliString::uniform(a, n), w[static_cast<int>(a)]);
  }
  return NoiseModel::from_sorted(n, std::move(entries));
}

/// Weight of `s` under (1-mu) * uncorrelated + mu * fully_correlated.
inline double mixture_weight(const DepolarizingParams& params, const PauliString& s) {
  const std::size_t n = s.size();
  double correlated = 0.0;
  bool uniform = true;
  for (std::size_t k = 1; k < n; ++k) {
    uniform = uniform && s[k] == s[0];
  }
  if (uniform) {
    correlated = depolarizing_weights(params.p)[static_cast<int>(s[0])];
  }
  return (1.0 - params.mu) * uncorrelated_weight(params.p, n, s.weight()) +
         params.mu * correlated;
}

inline NoiseModel convex_mixture(const DepolarizingParams& params,
                                 std::size_t cap = kDefaultEnumerationCap) {
  params.validate();
  if (params.mu == 1.0) {
    return fully_correlated(params.p, params.n);
  }
  if (params.mu == 0.0) {
    return uncorrelated(params.p, params.n, cap);
  }
  check_enumeration_cap(params.n, cap);
  const std::size_t n = params.n;
  const auto single = depolarizing_weights(params.p);
  std::array<double, 64> by_weight{};
  for (std::size_t k = 0; k <= n; ++k) {
    by_weight[k] = uncorrelated_weight(params.p, n, k);
  }
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  const std::uint64_t repunit = (count - 1) / 3;
  std::vector<NoiseModel::Entry> entries;
  entries.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    PauliString s = PauliString::from_index(idx, n);
    // Uniform strings a^n are exactly the multiples of the base-4 repunit.
    double correlated = idx % repunit == 0 ? single[idx / repunit] : 0.0;
    double w = (1.0 - params.mu) * by_weight[s.weight()] + params.mu * correlated;
    entries.emplace_back(std::move(s), w);
  }
  return NoiseModel::from_sorted(n, std::move(entries));
}

}  // namespace corrfb
