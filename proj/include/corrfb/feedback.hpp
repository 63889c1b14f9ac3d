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

// Feedback correction with partial access to the environment.
//
// A Pauli noise model is split by the outcome of a measurement on the
// environments of a subset of qubits. After each outcome a Pauli correction is
// applied to the whole register. For Pauli errors and Pauli corrections the
// entanglement fidelity of the corrected channel is linear in the correction
// probabilities: correction g after outcome a recovers exactly the error g,
// contributing its model weight.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrfb/errors.hpp"
#include "corrfb/noise.hpp"
#include "corrfb/pauli.hpp"

namespace corrfb {

/// Distance to a region threshold that is reported as a boundary.
inline constexpr double kBoundaryTolerance = 1e-12;
/// Accepted deviation of a correction distribution from unit total.
inline constexpr double kStrategyNormalizationTolerance = 1e-12;

/// Qubits whose environments are measured. Indices are 0-based here; the
/// text interfaces use 1-based qubit numbers.
class MeasurementPartition {
 public:
  MeasurementPartition(std::size_t n, std::vector<std::size_t> measured)
      : n_(n), measured_(std::move(measured)) {
    if (n_ == 0) {
      throw InputError("partition needs at least one qubit");
    }
    if (measured_.empty()) {
      throw InputError("at least one qubit must be measured");
    }
    std::sort(measured_.begin(), measured_.end());
    if (std::adjacent_find(measured_.begin(), measured_.end()) != measured_.end()) {
      throw InputError("measured qubits must be distinct");
    }
    if (measured_.back() >= n_) {
      throw InputError("measured qubit index out of range");
    }
    for (std::size_t q = 0; q < n_; ++q) {
      if (!std::binary_search(measured_.begin(), measured_.end(), q)) {
        unmeasured_.push_back(q);
      }
    }
  }

  /// Only the environment of the first qubit is accessible.
  static MeasurementPartition first_qubit(std::size_t n) { return {n, {0}}; }

  /// Every environment is accessible.
  static MeasurementPartition full(std::size_t n) {
    std::vector<std::size_t> all(n);
    for (std::size_t q = 0; q < n; ++q) all[q] = q;
    return {n, std::move(all)};
  }

  std::size_t num_qubits() const { return n_; }
  const std::vector<std::size_t>& measured() const { return measured_; }
  const std::vector<std::size_t>& unmeasured() const { return unmeasured_; }

  std::uint64_t num_outcomes() const { return std::uint64_t{1} << (2 * measured_.size()); }

  /// All outcome labels in lexicographic order.
  std::vector<PauliString> outcomes() const {
    std::vector<PauliString> out;
    out.reserve(num_outcomes());
    for (std::uint64_t k = 0; k < num_outcomes(); ++k) {
      out.push_back(PauliString::from_index(k, measured_.size()));
    }
    return out;
  }

  /// Position of `s`'s measured factors in outcomes().
  std::uint64_t outcome_index(const PauliString& s) const {
    std::uint64_t index = 0;
    for (std::size_t q : measured_) {
      index = (index << 2) | static_cast<std::uint64_t>(s[q]);
    }
    return index;
  }

  /// Correction that applies `outcome` on the measured qubits and identity elsewhere.
  PauliString paper_form_default(const PauliString& outcome) const {
    std::vector<PauliIndex> f(n_, PauliIndex::I);
    for (std::size_t k = 0; k < measured_.size(); ++k) {
      f[measured_[k]] = outcome[k];
    }
    return PauliString(f);
  }

  friend bool operator==(const MeasurementPartition&, const MeasurementPartition&) = default;

 private:
  std::size_t n_;
  std::vector<std::size_t> measured_;
  std::vector<std::size_t> unmeasured_;
};

/// The sub-normalized branch of a model consistent with one outcome.
struct SelectedOutput {
  PauliString outcome;
  std::vector<NoiseModel::Entry> components;

  double probability() const {
    double t = 0.0;
    for (const auto& c : components) t += c.second;
    return t;
  }
};

namespace detail {

inline void check_outcome(const MeasurementPartition& partition, const PauliString& outcome) {
  if (outcome.size() != partition.measured().size()) {
    throw InputError("outcome '" + outcome.str() + "' has length " +
                     std::to_string(outcome.size()) + ", expected " +
                     std::to_string(partition.measured().size()));
  }
}

inline void check_sizes(const NoiseModel& model, const MeasurementPartition& partition) {
  if (model.num_qubits() != partition.num_qubits()) {
    throw InputError("model acts on " + std::to_string(model.num_qubits()) +
                     " qubits but the partition covers " +
                     std::to_string(partition.num_qubits()));
  }
}

}  // namespace detail

inline SelectedOutput select(const NoiseModel& model, const MeasurementPartition& partition,
                             const PauliString& outcome) {
  detail::check_sizes(model, partition);
  detail::check_outcome(partition, outcome);
  SelectedOutput out{outcome, {}};
  for (const auto& e : model.entries()) {
    if (e.first.matches_on(partition.measured(), outcome)) {
      out.components.push_back(e);
    }
  }
  return out;
}

/// Splits the whole model by outcome in one pass; result is indexed like outcomes().
inline std::vector<SelectedOutput> select_all(const NoiseModel& model,
                                              const MeasurementPartition& partition) {
  detail::check_sizes(model, partition);
  std::vector<SelectedOutput> out;
  for (auto& o : partition.outcomes()) {
    out.push_back({std::move(o), {}});
  }
  for (const auto& e : model.entries()) {
    out[partition.outcome_index(e.first)].components.push_back(e);
  }
  return out;
}

inline double outcome_probability(const NoiseModel& model, const MeasurementPartition& partition,
                                  const PauliString& outcome) {
  return select(model, partition, outcome).probability();
}

/// Per-outcome probability distributions over correction strings.
class RecoveryStrategy {
 public:
  using Distribution = std::map<PauliString, double>;

  RecoveryStrategy(std::size_t n, std::map<PauliString, Distribution> per_outcome) : n_(n) {
    if (n_ == 0) {
      throw InputError("strategy needs at least one qubit");
    }
    std::optional<std::size_t> outcome_len;
    for (auto& [outcome, dist] : per_outcome) {
      if (outcome_len && *outcome_len != outcome.size()) {
        throw InputError("strategy outcomes have inconsistent lengths");
      }
      outcome_len = outcome.size();
      double total = 0.0;
      Distribution kept;
      for (const auto& [g, q] : dist) {
        if (g.size() != n_) {
          throw InputError("correction '" + g.str() + "' has length " + std::to_string(g.size()) +
                           ", expected " + std::to_string(n_));
        }
        if (!(q >= 0.0)) {
          throw InputError("negative correction probability for '" + g.str() + "'");
        }
        total += q;
        if (q > 0.0) kept.emplace(g, q);
      }
      if (std::abs(total - 1.0) > kStrategyNormalizationTolerance) {
        throw InputError("correction probabilities for outcome '" + outcome.str() + "' sum to " +
                         std::to_string(total));
      }
      per_outcome_.emplace(outcome, std::move(kept));
    }
  }

  static RecoveryStrategy deterministic(std::size_t n,
                                        const std::map<PauliString, PauliString>& choice) {
    std::map<PauliString, Distribution> d;
    for (const auto& [o, g] : choice) d[o][g] = 1.0;
    return RecoveryStrategy(n, std::move(d));
  }

  /// (1 - lambda) * a + lambda * b, outcome by outcome. Both must cover the same outcomes.
  static RecoveryStrategy mix(const RecoveryStrategy& a, const RecoveryStrategy& b,
                              double lambda) {
    if (a.n_ != b.n_ || a.per_outcome_.size() != b.per_outcome_.size()) {
      throw InputError("strategies are not compatible");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw InputError("mixing weight must lie in [0, 1]");
    }
    std::map<PauliString, Distribution> d;
    for (const auto& [o, dist] : a.per_outcome_) {
      auto it = b.per_outcome_.find(o);
      if (it == b.per_outcome_.end()) {
        throw InputError("strategies cover different outcomes");
      }
      auto& out = d[o];
      for (const auto& [g, q] : dist) out[g] += (1.0 - lambda) * q;
      for (const auto& [g, q] : it->second) out[g] += lambda * q;
    }
    return RecoveryStrategy(a.n_, std::move(d));
  }

  std::size_t num_qubits() const { return n_; }
  const std::map<PauliString, Distribution>& outcomes() const { return per_outcome_; }

  const Distribution* find(const PauliString& outcome) const {
    auto it = per_outcome_.find(outcome);
    return it == per_outcome_.end() ? nullptr : &it->second;
  }

  /// Every correction applies the outcome itself on the measured qubits.
  bool is_paper_form(const MeasurementPartition& partition) const {
    for (const auto& [o, dist] : per_outcome_) {
      for (const auto& [g, q] : dist) {
        if (!g.matches_on(partition.measured(), o)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const RecoveryStrategy&, const RecoveryStrategy&) = default;

 private:
  std::size_t n_;
  std::map<PauliString, Distribution> per_outcome_;
};

struct RegionLabel {
  enum class Kind { A, B, C, Boundary };
  enum class Edge { None, AB, BC, ABC };

  Kind kind = Kind::B;
  Edge edge = Edge::None;

  std::string str() const {
    switch (kind) {
      case Kind::A:
        return "A";
      case Kind::B:
        return "B";
      case Kind::C:
        return "C";
      case Kind::Boundary:
        break;
    }
    switch (edge) {
      case Edge::AB:
        return "Boundary(AB)";
      case Edge::BC:
        return "Boundary(BC)";
      case Edge::ABC:
        return "Boundary(ABC)";
      case Edge::None:
        break;
    }
    return "Boundary";
  }

  /// Region whose formula and strategy are used; boundaries take the B side.
  Kind effective() const { return kind == Kind::Boundary ? Kind::B : kind; }

  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

/// Region of the depolarizing mixture together with both thresholds.
///
/// With X = (1-p)^(n-1) - (p/3)^(n-1), mu_ab = X / (X + 1) separates A from B
/// when X > 0 and mu_bc = -X / (1 - X) separates C from B when X < 0.
struct RegionInfo {
  RegionLabel label;
  double mu_ab = 0.0;
  double mu_bc = 0.0;
  double x = 0.0;

  bool ab_meaningful() const { return x >= 0.0; }
  bool bc_meaningful() const { return x <= 0.0; }
};

struct FidelityReport {
  double total = 0.0;
  std::map<PauliString, double> per_outcome;
  std::optional<RegionInfo> region;
  RecoveryStrategy strategy;
  /// Some correction does not apply the outcome on the measured qubits.
  bool non_paper_form = false;
};

/// Entanglement fidelity of the model corrected by `strategy`.
inline FidelityReport corrected_fidelity(const NoiseModel& model,
                                         const MeasurementPartition& partition,
                                         const RecoveryStrategy& strategy) {
  detail::check_sizes(model, partition);
  if (strategy.num_qubits() != model.num_qubits()) {
    throw InputError("strategy acts on " + std::to_string(strategy.num_qubits()) +
                     " qubits, model on " + std::to_string(model.num_qubits()));
  }
  for (const auto& [o, dist] : strategy.outcomes()) {
    detail::check_outcome(partition, o);
  }
  FidelityReport report{0.0, {}, std::nullopt, strategy, false};
  for (const SelectedOutput& sel : select_all(model, partition)) {
    const auto* dist = strategy.find(sel.outcome);
    double f = 0.0;
    if (dist == nullptr) {
      if (sel.probability() > 0.0) {
        throw InputError("strategy has no correction for outcome '" + sel.outcome.str() + "'");
      }
    } else {
      for (const auto& [g, q] : *dist) {
        if (!g.matches_on(partition.measured(), sel.outcome)) {
          // g cannot undo any error in this branch.
          report.non_paper_form = true;
          continue;
        }
        f += q * model.weight(g);
      }
    }
    report.per_outcome.emplace(sel.outcome, f);
    report.total += f;
  }
  return report;
}

/// Optimal recovery by per-outcome vertex selection.
///
/// The fidelity is linear on each outcome's simplex of correction
/// probabilities, so a deterministic correction is optimal: the most probable
/// error in the branch. Ties go to the lexicographically smallest string.
/// Outcomes of probability zero get the outcome followed by identities.
inline FidelityReport optimize_recovery(const NoiseModel& model,
                                        const MeasurementPartition& partition,
                                        std::size_t cap = kDefaultEnumerationCap) {
  detail::check_sizes(model, partition);
  check_enumeration_cap(partition.measured().size(), cap);
  if (model.support_size() > (std::uint64_t{1} << (2 * cap))) {
    throw ResourceError("model support of " + std::to_string(model.support_size()) +
                        " strings exceeds the enumeration cap");
  }
  std::map<PauliString, PauliString> choice;
  std::map<PauliString, double> best_values;
  double total = 0.0;
  for (const SelectedOutput& sel : select_all(model, partition)) {
    const NoiseModel::Entry* best = nullptr;
    // Components are sorted, so a strict comparison keeps the smallest string on ties.
    for (const auto& e : sel.components) {
      if (best == nullptr || e.second > best->second) best = &e;
    }
    PauliString g = best ? best->first : partition.paper_form_default(sel.outcome);
    double value = best ? best->second : 0.0;
    choice.emplace(sel.outcome, std::move(g));
    best_values.emplace(sel.outcome, value);
    total += value;
  }
  return FidelityReport{total, std::move(best_values), std::nullopt,
                        RecoveryStrategy::deterministic(model.num_qubits(), choice), false};
}

inline RegionInfo classify_region(const DepolarizingParams& params) {
  params.validate();
  if (params.n < 2) {
    throw InputError("region classification needs n >= 2 (n = 1 is full access)");
  }
  const double e = static_cast<double>(params.n - 1);
  RegionInfo info;
  info.x = std::pow(1.0 - params.p, e) - std::pow(params.p / 3.0, e);
  info.mu_ab = info.x / (info.x + 1.0);
  info.mu_bc = info.x == 1.0 ? -std::numeric_limits<double>::infinity()
                             : -info.x / (1.0 - info.x);
  using Kind = RegionLabel::Kind;
  using Edge = RegionLabel::Edge;
  const double mu = params.mu;
  if (info.x > 0.0) {
    if (std::abs(mu - info.mu_ab) <= kBoundaryTolerance) {
      info.label = {Kind::Boundary, Edge::AB};
    } else {
      info.label = {mu < info.mu_ab ? Kind::A : Kind::B, Edge::None};
    }
  } else if (info.x < 0.0) {
    if (std::abs(mu - info.mu_bc) <= kBoundaryTolerance) {
      info.label = {Kind::Boundary, Edge::BC};
    } else {
      info.label = {mu < info.mu_bc ? Kind::C : Kind::B, Edge::None};
    }
  } else {
    info.label = mu <= kBoundaryTolerance ? RegionLabel{Kind::Boundary, Edge::ABC}
                                          : RegionLabel{Kind::B, Edge::None};
  }
  return info;
}

/// Deterministic strategy of a region, first qubit measured.
///   A: a -> a I..I      B: a -> a a..a      C: I -> I X..X, i -> i i..i
inline RecoveryStrategy region_strategy(RegionLabel::Kind kind, std::size_t n) {
  if (n < 1) {
    throw InputError("n must be at least 1");
  }
  const RegionLabel::Kind k = kind == RegionLabel::Kind::Boundary ? RegionLabel::Kind::B : kind;
  std::map<PauliString, PauliString> choice;
  for (PauliIndex a : kAllPaulis) {
    std::vector<PauliIndex> f(n, PauliIndex::I);
    f[0] = a;
    for (std::size_t q = 1; q < n; ++q) {
      switch (k) {
        case RegionLabel::Kind::A:
          break;
        case RegionLabel::Kind::C:
          f[q] = a == PauliIndex::I ? PauliIndex::X : a;
          break;
        default:
          f[q] = a;
          break;
      }
    }
    choice.emplace(PauliString{a}, PauliString(f));
  }
  return RecoveryStrategy::deterministic(n, choice);
}

namespace detail {

// Per-outcome optimal contributions of each region, first qubit measured:
// index 0 is outcome I, index 1 any of X, Y, Z.
inline std::array<double, 2> region_contributions(RegionLabel::Kind kind,
                                                  const DepolarizingParams& params) {
  const double p = params.p, mu = params.mu;
  const double e = static_cast<double>(params.n - 1);
  const double clean = std::pow(1.0 - p, e);
  const double dirty = std::pow(p / 3.0, e);
  const double keep_zero = (1.0 - p) * ((1.0 - mu) * clean + mu);
  const double flip_all = (p / 3.0) * ((1.0 - mu) * dirty + mu);
  switch (kind) {
    case RegionLabel::Kind::A:
      return {keep_zero, (p / 3.0) * (1.0 - mu) * clean};
    case RegionLabel::Kind::C:
      return {(1.0 - p) * (1.0 - mu) * dirty, flip_all};
    default:
      return {keep_zero, flip_all};
  }
}

}  // namespace detail

/// Closed-form optimal fidelity of a region for the depolarizing mixture.
inline double region_fidelity(RegionLabel::Kind kind, const DepolarizingParams& params) {
  const double p = params.p, mu = params.mu;
  const double e = static_cast<double>(params.n - 1);
  switch (kind) {
    case RegionLabel::Kind::A:
      return (1.0 - mu) * std::pow(1.0 - p, e) + mu * (1.0 - p);
    case RegionLabel::Kind::C:
      return (1.0 - mu) * std::pow(p / 3.0, e) + mu * p;
    default:
      return (1.0 - mu) * (std::pow(1.0 - p, e + 1.0) + 3.0 * std::pow(p / 3.0, e + 1.0)) + mu;
  }
}

inline FidelityReport theoretical_fidelity(const DepolarizingParams& params) {
  RegionInfo info = classify_region(params);
  const RegionLabel::Kind kind = info.label.effective();
  auto contrib = detail::region_contributions(kind, params);
  std::map<PauliString, double> per_outcome;
  for (PauliIndex a : kAllPaulis) {
    per_outcome.emplace(PauliString{a}, contrib[a == PauliIndex::I ? 0 : 1]);
  }
  return FidelityReport{region_fidelity(kind, params), std::move(per_outcome), info,
                        region_strategy(kind, params.n), false};
}

/// Optimal recovery for the depolarizing mixture with the first qubit
/// measured, without expanding 4^n strings.
///
/// Non-uniform strings with the same number of non-identity factors share one
/// weight, so each class is represented by its smallest member (outcome, then
/// identities, then X's); the uniform string a^n is added separately. Weights
/// are evaluated exactly as convex_mixture does, so the result, including
/// tie-breaking, matches optimize_recovery on the expanded model.
inline FidelityReport optimize_depolarizing(const DepolarizingParams& params) {
  params.validate();
  const std::size_t n = params.n;
  std::map<PauliString, PauliString> choice;
  std::map<PauliString, double> best_values;
  double total = 0.0;
  for (PauliIndex a : kAllPaulis) {
    std::vector<PauliString> candidates;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<PauliIndex> f(n, PauliIndex::X);
      f[0] = a;
      for (std::size_t q = 1; q < n - k; ++q) f[q] = PauliIndex::I;
      candidates.emplace_back(f);
    }
    candidates.push_back(PauliString::uniform(a, n));
    const PauliString* best = nullptr;
    double best_w = 0.0;
    for (const auto& g : candidates) {
      double w = mixture_weight(params, g);
      if (best == nullptr || w > best_w || (w == best_w && g < *best)) {
        best = &g;
        best_w = w;
      }
    }
    PauliString outcome{a};
    if (best_w == 0.0) {
      choice.emplace(outcome, MeasurementPartition::first_qubit(n).paper_form_default(outcome));
    } else {
      choice.emplace(outcome, *best);
    }
    best_values.emplace(outcome, best_w);
    total += best_w;
  }
  FidelityReport report{total, std::move(best_values), std::nullopt,
                        RecoveryStrategy::deterministic(n, choice), false};
  if (n >= 2) report.region = classify_region(params);
  return report;
}

/// Large-n limit of the closed-form fidelity of the region that `params`
/// falls in: mu in region B, mu (1-p) in A, mu p in C (p = 0 keeps the
/// surviving (1-p)^n terms).
inline double asymptote(const DepolarizingParams& params) {
  RegionInfo info = classify_region(params);
  const double p = params.p, mu = params.mu;
  const double clean_limit = p == 0.0 ? 1.0 : 0.0;
  switch (info.label.effective()) {
    case RegionLabel::Kind::A:
      return (1.0 - mu) * clean_limit + mu * (1.0 - p);
    case RegionLabel::Kind::C:
      return mu * p;
    default:
      return (1.0 - mu) * clean_limit + mu;
  }
}

}  // namespace corrfb
