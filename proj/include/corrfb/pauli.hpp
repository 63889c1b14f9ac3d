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

#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "corrfb/errors.hpp"

namespace corrfb {

/// Single-qubit Pauli label. The numeric order doubles as the sort order of
/// Pauli strings (I < X < Y < Z).
enum class PauliIndex : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<PauliIndex, 4> kAllPaulis = {PauliIndex::I, PauliIndex::X,
                                                         PauliIndex::Y, PauliIndex::Z};

/// Default qubit cap for explicit density matrices (state dimension 4^n).
inline constexpr std::size_t kDefaultDenseCap = 4;
/// Hard cap for anything that renders 2^n x 2^n operators.
inline constexpr std::size_t kMaxDenseCap = 6;

inline char pauli_char(PauliIndex p) { return "IXYZ"[static_cast<int>(p)]; }

inline PauliIndex pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return PauliIndex::I;
    case 'X':
      return PauliIndex::X;
    case 'Y':
      return PauliIndex::Y;
    case 'Z':
      return PauliIndex::Z;
    default:
      throw InputError(std::string("invalid Pauli character '") + c + "'");
  }
}

/// Tensor product of single-qubit Paulis. Factor 0 is the measured qubit.
///
/// Factors are kept as raw bytes 0..3 in a std::string, so short strings stay
/// in the small-buffer and lexicographic comparison is a memcmp.
class PauliString {
 public:
  explicit PauliString(std::span<const PauliIndex> factors) {
    if (factors.empty()) {
      throw InputError("Pauli string must act on at least one qubit");
    }
    data_.reserve(factors.size());
    for (PauliIndex f : factors) {
      auto v = static_cast<std::uint8_t>(f);
      if (v > 3) {
        throw InputError("Pauli factor out of range");
      }
      data_.push_back(static_cast<char>(v));
    }
  }
  PauliString(std::initializer_list<PauliIndex> factors)
      : PauliString(std::span<const PauliIndex>(factors.begin(), factors.size())) {}

  static PauliString identity(std::size_t n) { return uniform(PauliIndex::I, n); }

  static PauliString uniform(PauliIndex p, std::size_t n) {
    if (n == 0) {
      throw InputError("Pauli string must act on at least one qubit");
    }
    return PauliString(std::string(n, static_cast<char>(p)));
  }

  /// Parses text such as "XIZ"; the first character is the measured qubit.
  static PauliString parse(std::string_view text) {
    if (text.empty()) {
      throw InputError("empty Pauli string");
    }
    std::string raw(text.size(), '\0');
    for (std::size_t k = 0; k < text.size(); ++k) {
      raw[k] = static_cast<char>(pauli_from_char(text[k]));
    }
    return PauliString(std::move(raw));
  }

  /// Decodes a base-4 counter, most significant digit first.
  static PauliString from_index(std::uint64_t index, std::size_t n) {
    if (n == 0) {
      throw InputError("Pauli string must act on at least one qubit");
    }
    std::string raw(n, '\0');
    for (std::size_t k = n; k-- > 0;) {
      raw[k] = static_cast<char>(index & 3u);
      index >>= 2;
    }
    return PauliString(std::move(raw));
  }

  std::size_t size() const { return data_.size(); }

  PauliIndex operator[](std::size_t k) const { return static_cast<PauliIndex>(data_[k]); }

  std::string str() const {
    std::string out(data_.size(), 'I');
    for (std::size_t k = 0; k < data_.size(); ++k) {
      out[k] = pauli_char((*this)[k]);
    }
    return out;
  }

  /// Number of non-identity factors.
  std::size_t weight() const {
    std::size_t w = 0;
    for (char c : data_) {
      w += c != 0;
    }
    return w;
  }

  bool is_identity() const { return weight() == 0; }

  /// Factors at the given qubit positions, in the given order.
  PauliString restrict_to(std::span<const std::size_t> qubits) const {
    std::string raw;
    raw.reserve(qubits.size());
    for (std::size_t q : qubits) {
      if (q >= data_.size()) {
        throw InputError("qubit index out of range");
      }
      raw.push_back(data_[q]);
    }
    if (raw.empty()) {
      throw InputError("restriction to an empty qubit set");
    }
    return PauliString(std::move(raw));
  }

  /// True when the factors at `qubits` spell `pattern`.
  bool matches_on(std::span<const std::size_t> qubits, const PauliString& pattern) const {
    if (pattern.size() != qubits.size()) {
      return false;
    }
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      if (data_[qubits[k]] != pattern.data_[k]) {
        return false;
      }
    }
    return true;
  }

  /// Base-4 index, inverse of from_index.
  std::uint64_t to_index() const {
    std::uint64_t index = 0;
    for (char c : data_) {
      index = (index << 2) | static_cast<std::uint64_t>(c);
    }
    return index;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    int c = a.data_.compare(b.data_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit PauliString(std::string raw) : data_(std::move(raw)) {}

  std::string data_;
};

/// i^phase_exponent times a Pauli string.
struct PhasedPauli {
  PauliString pauli;
  std::uint8_t phase_exponent = 0;

  friend bool operator==(const PhasedPauli&, const PhasedPauli&) = default;
};

namespace detail {

// sigma_a sigma_b = i^phase sigma_c on a single qubit. With X=1, Y=2, Z=3 the
// product label of two distinct non-identity Paulis is a ^ b, and the cyclic
// order X -> Y -> Z picks +i.
struct SingleProduct {
  std::uint8_t label;
  std::uint8_t phase;
};

constexpr SingleProduct single_product(std::uint8_t a, std::uint8_t b) {
  if (a == 0) return {b, 0};
  if (b == 0 || a == b) return {static_cast<std::uint8_t>(a ^ b), 0};
  std::uint8_t label = a ^ b;
  return {label, static_cast<std::uint8_t>((b + 3 - a) % 3 == 1 ? 1 : 3)};
}

}  // namespace detail

inline PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw InputError("Pauli strings have different lengths (" + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()) + ")");
  }
  std::vector<PauliIndex> out(a.size());
  unsigned phase = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto r = detail::single_product(static_cast<std::uint8_t>(a[k]),
                                    static_cast<std::uint8_t>(b[k]));
    out[k] = static_cast<PauliIndex>(r.label);
    phase += r.phase;
  }
  return {PauliString(out), static_cast<std::uint8_t>(phase & 3u)};
}

inline PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  PhasedPauli r = multiply(a.pauli, b.pauli);
  r.phase_exponent = static_cast<std::uint8_t>((r.phase_exponent + a.phase_exponent +
                                                b.phase_exponent) & 3u);
  return r;
}

/// |tr(sigma_a sigma_b)|^2: 4^n when a == b, otherwise 0.
inline double trace_rule(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw InputError("Pauli strings have different lengths");
  }
  if (a != b) {
    return 0.0;
  }
  double dim = std::ldexp(1.0, static_cast<int>(a.size()));
  return dim * dim;
}

inline std::complex<double> i_power(unsigned k) {
  switch (k & 3u) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

/// Standard 2x2 matrix of a single-qubit Pauli.
inline Eigen::Matrix2cd pauli_matrix(PauliIndex p) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (p) {
    case PauliIndex::I:
      m << C(1, 0), C(0, 0), C(0, 0), C(1, 0);
      break;
    case PauliIndex::X:
      m << C(0, 0), C(1, 0), C(1, 0), C(0, 0);
      break;
    case PauliIndex::Y:
      m << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
      break;
    case PauliIndex::Z:
      m << C(1, 0), C(0, 0), C(0, 0), C(-1, 0);
      break;
  }
  return m;
}

/// Dense 2^n x 2^n matrix of i^phase (sigma_0 x sigma_1 x ...). Qubit 0 is the
/// most significant tensor factor.
inline Eigen::MatrixXcd to_dense(const PhasedPauli& a, std::size_t cap = kMaxDenseCap) {
  const std::size_t n = a.pauli.size();
  if (n > cap) {
    throw ResourceError("dense rendering of a " + std::to_string(n) +
                        "-qubit Pauli exceeds the cap of " + std::to_string(cap) + " qubits");
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::Matrix2cd f = pauli_matrix(a.pauli[k]);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  return out * i_power(a.phase_exponent);
}

inline Eigen::MatrixXcd to_dense(const PauliString& a, std::size_t cap = kMaxDenseCap) {
  return to_dense(PhasedPauli{a, 0}, cap);
}

}  // namespace corrfb
