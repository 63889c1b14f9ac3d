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

// Dense-matrix reference evaluation of corrected channels.
//
// Everything here goes through explicit 2^n x 2^n operator matrices built from
// the standard Pauli matrices, and explicit states on system (x) reference.
// None of it uses the weight bookkeeping of feedback.hpp, which makes it
// usable as an independent check of that module.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corrfb/errors.hpp"
#include "corrfb/feedback.hpp"
#include "corrfb/noise.hpp"
#include "corrfb/pauli.hpp"

namespace corrfb {

/// Largest n accepted by brute_force_optimize.
inline constexpr std::size_t kBruteForceCap = 3;
/// Allowed disagreement between the two fidelity routes, and the completeness slack.
inline constexpr double kOracleTolerance = 1e-10;

struct KrausTerm {
  double amplitude = 0.0;
  PhasedPauli pauli;
};

/// Kraus operators amplitude * (phased Pauli string), all on n qubits.
///
/// Sets describing a single outcome branch are sub-normalized; completeness is
/// enforced where a full channel is required.
class KrausSet {
 public:
  KrausSet(std::size_t n, std::vector<KrausTerm> ops) : n_(n), ops_(std::move(ops)) {
    if (n_ == 0) {
      throw InputError("Kraus set needs at least one qubit");
    }
    for (const auto& op : ops_) {
      if (op.pauli.pauli.size() != n_) {
        throw InputError("Kraus operator '" + op.pauli.pauli.str() + "' has wrong length");
      }
      if (!(op.amplitude >= 0.0)) {
        throw InputError("Kraus amplitudes must be nonnegative");
      }
    }
  }

  std::size_t num_qubits() const { return n_; }
  const std::vector<KrausTerm>& operators() const { return ops_; }

  /// sum_k amplitude_k^2; Pauli strings are unitary so sum t^dag t = this * I.
  double total_weight() const {
    double t = 0.0;
    for (const auto& op : ops_) t += op.amplitude * op.amplitude;
    return t;
  }

  double completeness_defect() const { return std::abs(total_weight() - 1.0); }

 private:
  std::size_t n_;
  std::vector<KrausTerm> ops_;
};

namespace detail {

inline void check_dense_cap(std::size_t n, std::size_t cap) {
  if (cap > kMaxDenseCap) {
    throw ResourceError("oracle cap " + std::to_string(cap) + " exceeds the hard limit of " +
                        std::to_string(kMaxDenseCap) + " qubits");
  }
  if (n > cap) {
    throw ResourceError("dense evaluation of " + std::to_string(n) +
                        " qubits exceeds the oracle cap of " + std::to_string(cap));
  }
}

// Column action of a monomial matrix: K|j> = value[j] |row[j]>.
struct Monomial {
  std::vector<Eigen::Index> row;
  std::vector<std::complex<double>> value;
};

inline Monomial monomial_form(const Eigen::MatrixXcd& k) {
  Monomial m;
  m.row.resize(k.cols());
  m.value.resize(k.cols());
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    int found = 0;
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      if (k(r, c) != std::complex<double>(0.0, 0.0)) {
        m.row[c] = r;
        m.value[c] = k(r, c);
        ++found;
      }
    }
    if (found != 1) {
      throw ConsistencyFault("operator is not a monomial matrix");
    }
  }
  return m;
}

}  // namespace detail

/// d^(-1/2) sum_i |i>|i>, system index major: |i>|j> sits at i * d + j.
inline Eigen::VectorXcd max_entangled_vector(std::size_t n, std::size_t cap = kMaxDenseCap) {
  detail::check_dense_cap(n, cap);
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) psi(i * d + i) = amp;
  return psi;
}

/// Density matrix on system (x) reference, 2n qubits.
class DenseState {
 public:
  static DenseState max_entangled(std::size_t n, std::size_t cap = kDefaultDenseCap) {
    detail::check_dense_cap(n, cap);
    return from_pure(max_entangled_vector(n), n);
  }

  static DenseState from_pure(const Eigen::VectorXcd& psi, std::size_t n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    if (psi.size() != d * d) {
      throw InputError("state vector has the wrong dimension");
    }
    return DenseState(n, psi * psi.adjoint());
  }

  std::size_t num_qubits() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  std::complex<double> trace() const { return rho_.trace(); }

  double hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }

  /// Throws ConsistencyFault unless Hermitian, unit trace and positive semidefinite.
  void validate() const {
    if (hermiticity_defect() > 1e-12) throw ConsistencyFault("state is not Hermitian");
    if (std::abs(trace() - 1.0) > 1e-12) throw ConsistencyFault("state trace is not 1");
    if (min_eigenvalue() < -1e-10) throw ConsistencyFault("state is not positive semidefinite");
  }

  /// Partial trace over the reference half.
  Eigen::MatrixXcd reduced_system() const {
    const Eigen::Index d = Eigen::Index{1} << n_;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) out(i, j) += rho_(i * d + k, j * d + k);
    return out;
  }

  /// Partial trace over the system half.
  Eigen::MatrixXcd reduced_reference() const {
    const Eigen::Index d = Eigen::Index{1} << n_;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index k = 0; k < d; ++k) out(i, j) += rho_(k * d + i, k * d + j);
    return out;
  }

  /// (Phi (x) I)(rho) for the channel with the given Kraus operators.
  ///
  /// Each operator matrix is monomial, so (K (x) I) rho (K (x) I)^dag is a
  /// permutation of rho's entries with phases instead of two dense products.
  DenseState apply_system_channel(const KrausSet& kraus) const {
    if (kraus.num_qubits() != n_) {
      throw InputError("channel and state act on different qubit counts");
    }
    const Eigen::Index d = Eigen::Index{1} << n_;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho_.rows(), rho_.cols());
    for (const auto& op : kraus.operators()) {
      const double w = op.amplitude * op.amplitude;
      if (w == 0.0) continue;
      detail::Monomial m = detail::monomial_form(to_dense(op.pauli, kMaxDenseCap));
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index jp = 0; jp < d; ++jp) {
          const std::complex<double> f = w * m.value[j] * std::conj(m.value[jp]);
          const Eigen::Index r = m.row[j], rp = m.row[jp];
          for (Eigen::Index k = 0; k < d; ++k) {
            for (Eigen::Index kp = 0; kp < d; ++kp) {
              out(r * d + k, rp * d + kp) += f * rho_(j * d + k, jp * d + kp);
            }
          }
        }
      }
    }
    return DenseState(n_, std::move(out));
  }

  /// <psi| rho |psi>
  double expectation(const Eigen::VectorXcd& psi) const {
    return (psi.adjoint() * rho_ * psi)(0, 0).real();
  }

 private:
  DenseState(std::size_t n, Eigen::MatrixXcd rho) : n_(n), rho_(std::move(rho)) {}

  std::size_t n_;
  Eigen::MatrixXcd rho_;
};

/// Both evaluations of the entanglement fidelity.
struct DenseFidelity {
  /// <Psi| (Phi (x) I)(|Psi><Psi|) |Psi>
  double overlap = 0.0;
  /// d^-2 sum_k |tr A_k|^2
  double trace = 0.0;
};

/// Evaluates both forms without requiring completeness, so single outcome
/// branches can be scored. Throws ConsistencyFault if the forms disagree.
inline DenseFidelity dense_fidelity_forms(const KrausSet& kraus,
                                          std::size_t cap = kDefaultDenseCap) {
  const std::size_t n = kraus.num_qubits();
  detail::check_dense_cap(n, cap);
  const double d = std::ldexp(1.0, static_cast<int>(n));
  DenseFidelity out;

  for (const auto& op : kraus.operators()) {
    const std::complex<double> tr = to_dense(op.pauli, cap).trace();
    out.trace += op.amplitude * op.amplitude * std::norm(tr);
  }
  out.trace /= d * d;

  const Eigen::VectorXcd psi = max_entangled_vector(n, cap);
  if (n <= kDefaultDenseCap) {
    DenseState rho = DenseState::max_entangled(n, kDefaultDenseCap).apply_system_channel(kraus);
    out.overlap = rho.expectation(psi);
  } else {
    // State too large to hold as a matrix: sum_k |<Psi|(A_k (x) I)|Psi>|^2.
    const Eigen::Index dim = Eigen::Index{1} << n;
    for (const auto& op : kraus.operators()) {
      detail::Monomial m = detail::monomial_form(to_dense(op.pauli, cap));
      Eigen::VectorXcd moved = Eigen::VectorXcd::Zero(psi.size());
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
          moved(m.row[j] * dim + k) += m.value[j] * psi(j * dim + k);
        }
      }
      out.overlap += op.amplitude * op.amplitude * std::norm(psi.dot(moved));
    }
  }

  if (std::abs(out.overlap - out.trace) > kOracleTolerance) {
    throw ConsistencyFault("overlap form " + std::to_string(out.overlap) +
                           " disagrees with trace form " + std::to_string(out.trace));
  }
  return out;
}

/// Entanglement fidelity of a complete channel (trace-form value).
inline double entanglement_fidelity_dense(const KrausSet& kraus,
                                          std::size_t cap = kDefaultDenseCap) {
  if (kraus.completeness_defect() > kOracleTolerance) {
    throw InputError("Kraus set is not complete: sum of squared amplitudes is " +
                     std::to_string(kraus.total_weight()));
  }
  return dense_fidelity_forms(kraus, cap).trace;
}

/// Kraus operators sqrt(w) e of one selected output.
inline KrausSet selected_kraus(const SelectedOutput& sel, std::size_t n) {
  std::vector<KrausTerm> ops;
  for (const auto& [e, w] : sel.components) {
    ops.push_back({std::sqrt(w), PhasedPauli{e, 0}});
  }
  return KrausSet(n, std::move(ops));
}

/// Kraus operators sqrt(q w) (g e) of the corrected channel, g applied after e.
inline KrausSet corrected_kraus(const std::vector<SelectedOutput>& selected,
                                const RecoveryStrategy& strategy) {
  const std::size_t n = strategy.num_qubits();
  std::vector<KrausTerm> ops;
  for (const auto& sel : selected) {
    const auto* dist = strategy.find(sel.outcome);
    if (dist == nullptr) {
      if (sel.probability() > 0.0) {
        throw InputError("strategy has no correction for outcome '" + sel.outcome.str() + "'");
      }
      continue;
    }
    for (const auto& [g, q] : *dist) {
      for (const auto& [e, w] : sel.components) {
        ops.push_back({std::sqrt(q * w), multiply(PhasedPauli{g, 0}, PhasedPauli{e, 0})});
      }
    }
  }
  KrausSet out(n, std::move(ops));
  if (out.completeness_defect() > kOracleTolerance) {
    throw InputError("corrected channel is not trace preserving");
  }
  return out;
}

inline KrausSet corrected_kraus(const NoiseModel& model, const MeasurementPartition& partition,
                                const RecoveryStrategy& strategy) {
  return corrected_kraus(select_all(model, partition), strategy);
}

struct CorrectabilityVerdict {
  bool pass = false;
  /// t^dag t = c I when pass is true.
  double c = 0.0;
  double defect = 0.0;
};

/// Tests whether t^dag t is a multiple of the identity.
inline CorrectabilityVerdict check_correctable_operator(const Eigen::MatrixXcd& t) {
  Eigen::MatrixXcd m = t.adjoint() * t;
  const double c = m(0, 0).real();
  const double defect =
      (m - c * Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  return {defect <= kOracleTolerance, c, defect};
}

/// One verdict per operator of the set.
inline std::vector<CorrectabilityVerdict> check_correctable(const KrausSet& kraus,
                                                            std::size_t cap = kDefaultDenseCap) {
  detail::check_dense_cap(kraus.num_qubits(), cap);
  std::vector<CorrectabilityVerdict> out;
  for (const auto& op : kraus.operators()) {
    out.push_back(check_correctable_operator(op.amplitude * to_dense(op.pauli, cap)));
  }
  return out;
}

/// Exhaustive search over deterministic outcome-matching strategies, scoring every
/// (outcome, correction) branch with the dense fidelity. Scores within 1e-12
/// of the best count as ties and resolve to the lexicographically smallest
/// correction.
inline FidelityReport brute_force_optimize(const NoiseModel& model,
                                           const MeasurementPartition& partition,
                                           std::size_t cap = kBruteForceCap) {
  const std::size_t n = model.num_qubits();
  if (cap > kBruteForceCap || n > cap) {
    throw ResourceError("brute-force search is limited to n <= " +
                        std::to_string(kBruteForceCap) + " qubits");
  }
  const auto& free_qubits = partition.unmeasured();
  const std::uint64_t choices = std::uint64_t{1} << (2 * free_qubits.size());
  std::map<PauliString, PauliString> choice;
  std::map<PauliString, double> values;
  double total = 0.0;
  for (const SelectedOutput& sel : select_all(model, partition)) {
    std::optional<PauliString> best;
    double best_value = 0.0;
    for (std::uint64_t idx = 0; idx < choices; ++idx) {
      std::vector<PauliIndex> f(n);
      for (std::size_t k = 0; k < partition.measured().size(); ++k) {
        f[partition.measured()[k]] = sel.outcome[k];
      }
      for (std::size_t k = 0; k < free_qubits.size(); ++k) {
        const std::size_t shift = 2 * (free_qubits.size() - 1 - k);
        f[free_qubits[k]] = static_cast<PauliIndex>((idx >> shift) & 3u);
      }
      PauliString g(f);
      std::vector<KrausTerm> ops;
      for (const auto& [e, w] : sel.components) {
        ops.push_back({std::sqrt(w), multiply(PhasedPauli{g, 0}, PhasedPauli{e, 0})});
      }
      const double value = dense_fidelity_forms(KrausSet(n, std::move(ops)), kDefaultDenseCap).trace;
      if (!best || value > best_value + 1e-12) {
        best = g;
        best_value = value;
      }
    }
    choice.emplace(sel.outcome, *best);
    values.emplace(sel.outcome, best_value);
    total += best_value;
  }
  return FidelityReport{total, std::move(values), std::nullopt,
                        RecoveryStrategy::deterministic(n, choice), false};
}

}  // namespace corrfb
