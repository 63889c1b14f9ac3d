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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corrfb/errors.hpp"
#include "corrfb/feedback.hpp"
#include "corrfb/noise.hpp"
#include "corrfb/pauli.hpp"

namespace corrfb {

using json = nlohmann::json;

/// Shortest decimal text that reads back as `x`, limited to 12 significant
/// digits. Negative zero prints as "0".
inline std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  for (int digits = 1; digits <= 12; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

/// `x` rounded the way format_number prints it.
inline double rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

inline json optional_number(std::optional<double> x) {
  return x ? json(rounded(*x)) : json(nullptr);
}

// Noise tables: {"n": 2, "weights": {"XX": 0.1, ...}}

inline json noise_model_to_json(const NoiseModel& model) {
  json weights = json::object();
  for (const auto& [s, w] : model.entries()) weights[s.str()] = w;
  return {{"n", model.num_qubits()}, {"weights", weights}};
}

inline NoiseModel noise_model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("weights")) {
    throw InputError("noise table needs \"n\" and \"weights\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    throw InputError("noise table \"n\" must be a positive integer");
  }
  if (!j["weights"].is_object()) {
    throw InputError("noise table \"weights\" must be an object");
  }
  const auto n = j["n"].get<std::size_t>();
  std::vector<NoiseModel::Entry> entries;
  for (const auto& [key, value] : j["weights"].items()) {
    if (!value.is_number()) {
      throw InputError("noise weight for '" + key + "' is not a number");
    }
    entries.emplace_back(PauliString::parse(key), value.get<double>());
  }
  return NoiseModel::from_table(n, std::move(entries));
}

// Strategies: {"outcomes": {"X": {"XX": 0.25, "XI": 0.75}, ...}}

inline json strategy_to_json(const RecoveryStrategy& strategy) {
  json outcomes = json::object();
  for (const auto& [o, dist] : strategy.outcomes()) {
    json d = json::object();
    for (const auto& [g, q] : dist) d[g.str()] = q;
    outcomes[o.str()] = d;
  }
  return {{"outcomes", outcomes}};
}

inline RecoveryStrategy strategy_from_json(const json& j) {
  if (!j.is_object() || !j.contains("outcomes") || !j["outcomes"].is_object()) {
    throw InputError("strategy needs an \"outcomes\" object");
  }
  std::optional<std::size_t> n;
  std::map<PauliString, RecoveryStrategy::Distribution> per_outcome;
  for (const auto& [okey, dist] : j["outcomes"].items()) {
    if (!dist.is_object()) {
      throw InputError("corrections for outcome '" + okey + "' must be an object");
    }
    auto& out = per_outcome[PauliString::parse(okey)];
    for (const auto& [gkey, q] : dist.items()) {
      if (!q.is_number()) {
        throw InputError("correction probability for '" + gkey + "' is not a number");
      }
      PauliString g = PauliString::parse(gkey);
      if (n && *n != g.size()) {
        throw InputError("corrections have inconsistent lengths");
      }
      n = g.size();
      out.emplace(std::move(g), q.get<double>());
    }
  }
  if (!n) {
    throw InputError("strategy has no corrections");
  }
  return RecoveryStrategy(*n, std::move(per_outcome));
}

inline json report_to_json(const FidelityReport& report) {
  json per_outcome = json::object();
  for (const auto& [o, f] : report.per_outcome) per_outcome[o.str()] = rounded(f);
  json out = {{"total", rounded(report.total)},
              {"per_outcome", per_outcome},
              {"region", nullptr},
              {"thresholds", {{"mu_AB", nullptr}, {"mu_BC", nullptr}}},
              {"strategy", strategy_to_json(report.strategy)},
              {"non_paper_form", report.non_paper_form}};
  if (report.region) {
    const RegionInfo& r = *report.region;
    out["region"] = r.label.str();
    out["thresholds"]["mu_AB"] =
        optional_number(r.ab_meaningful() ? std::optional<double>(r.mu_ab) : std::nullopt);
    out["thresholds"]["mu_BC"] =
        optional_number(r.bc_meaningful() ? std::optional<double>(r.mu_bc) : std::nullopt);
  }
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace corrfb
