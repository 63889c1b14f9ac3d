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

// Data products behind the command-line tool: region thresholds, fidelity
// versus qubit count, single-point reports and the oracle cross-check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corrfb/errors.hpp"
#include "corrfb/feedback.hpp"
#include "corrfb/io.hpp"
#include "corrfb/noise.hpp"
#include "corrfb/oracle.hpp"

namespace corrfb {

enum class OutputFormat { Csv, Json };

/// Runs body(i) for i in [0, count) on all hardware threads. Results must be
/// written to per-index slots; the first exception is rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Grid and range settings shared by the figure commands.
struct SweepSpec {
  std::vector<double> p;
  std::vector<double> mu;
  std::vector<std::size_t> n;
  std::string out;
  OutputFormat format = OutputFormat::Csv;

  /// Evenly spaced points on [0, 1], both ends included.
  static std::vector<double> unit_grid(std::size_t steps) {
    if (steps < 2) {
      throw InputError("a grid needs at least 2 points");
    }
    std::vector<double> g(steps);
    for (std::size_t k = 0; k < steps; ++k) {
      g[k] = static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    return g;
  }

  void validate(bool needs_mu) const {
    if (p.empty() || n.empty() || (needs_mu && mu.empty())) {
      throw InputError("sweep grids must be nonempty");
    }
    for (double x : p) check_probability(x);
    for (double x : mu) {
      if (!(x >= 0.0 && x <= 1.0)) throw InputError("mu values must lie in [0, 1]");
    }
    for (std::size_t k : n) {
      if (k < 2) throw InputError("region commands need n >= 2");
    }
  }
};

// ---------------------------------------------------------------- regions

struct RegionRow {
  std::size_t n = 2;
  double p = 0.0;
  std::optional<double> mu_ab;
  std::optional<double> mu_bc;
};

inline std::vector<RegionRow> cmd_regions(const SweepSpec& spec) {
  spec.validate(false);
  std::vector<RegionRow> rows(spec.n.size() * spec.p.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const std::size_t n = spec.n[i / spec.p.size()];
    const double p = spec.p[i % spec.p.size()];
    RegionInfo r = classify_region({p, 0.0, n});
    RegionRow row{n, p, std::nullopt, std::nullopt};
    if (r.ab_meaningful()) row.mu_ab = r.mu_ab;
    if (r.bc_meaningful()) row.mu_bc = r.mu_bc;
    rows[i] = row;
  });
  return rows;
}

inline std::string regions_csv(const std::vector<RegionRow>& rows) {
  std::ostringstream out;
  out << "n,p,mu_AB,mu_BC\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_number(r.p) << ','
        << (r.mu_ab ? format_number(*r.mu_ab) : "") << ','
        << (r.mu_bc ? format_number(*r.mu_bc) : "") << '\n';
  }
  return out.str();
}

inline json regions_json(const std::vector<RegionRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"p", rounded(r.p)},
                   {"mu_AB", optional_number(r.mu_ab)},
                   {"mu_BC", optional_number(r.mu_bc)}});
  }
  return out;
}

// ---------------------------------------------------------------- sweep-n

struct SweepRow {
  std::size_t n = 2;
  double mu = 0.0;
  double f_theoretical = 0.0;
  double f_optimized = 0.0;
  std::optional<double> f_oracle;
  std::string region;
};

/// Optimal fidelity versus n at fixed p, one block of rows per mu. The oracle
/// column is filled for n <= oracle_cap.
inline std::vector<SweepRow> cmd_sweep_n(const SweepSpec& spec,
                                         std::size_t oracle_cap = kDefaultDenseCap) {
  spec.validate(true);
  if (spec.p.size() != 1) {
    throw InputError("sweep-n takes a single p value");
  }
  if (oracle_cap > kMaxDenseCap) {
    throw ResourceError("oracle cap is limited to " + std::to_string(kMaxDenseCap) + " qubits");
  }
  const double p = spec.p.front();
  std::vector<SweepRow> rows(spec.mu.size() * spec.n.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const double mu = spec.mu[i / spec.n.size()];
    const std::size_t n = spec.n[i % spec.n.size()];
    const DepolarizingParams params{p, mu, n};
    FidelityReport theory = theoretical_fidelity(params);
    FidelityReport best = optimize_depolarizing(params);
    SweepRow row{n, mu, theory.total, best.total, std::nullopt, theory.region->label.str()};
    if (n <= oracle_cap) {
      const NoiseModel model = convex_mixture(params);
      row.f_oracle = entanglement_fidelity_dense(
          corrected_kraus(model, MeasurementPartition::first_qubit(n), best.strategy),
          oracle_cap);
    }
    rows[i] = row;
  });
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "n,mu,F_theoretical,F_optimized,F_oracle,region\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_number(r.mu) << ',' << format_number(r.f_theoretical) << ','
        << format_number(r.f_optimized) << ','
        << (r.f_oracle ? format_number(*r.f_oracle) : "") << ',' << r.region << '\n';
  }
  return out.str();
}

inline json sweep_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"mu", rounded(r.mu)},
                   {"F_theoretical", rounded(r.f_theoretical)},
                   {"F_optimized", rounded(r.f_optimized)},
                   {"F_oracle", optional_number(r.f_oracle)},
                   {"region", r.region}});
  }
  return out;
}

// ---------------------------------------------------------------- fidelity

/// Which recovery `cmd_fidelity` evaluates: a region strategy, the optimum,
/// or a strategy JSON file ("file:<path>").
struct StrategySelector {
  enum class Kind { A, B, C, Optimal, File };
  Kind kind = Kind::Optimal;
  std::string path;

  static StrategySelector parse(const std::string& text) {
    if (text == "A") return {Kind::A, {}};
    if (text == "B") return {Kind::B, {}};
    if (text == "C") return {Kind::C, {}};
    if (text == "optimal") return {Kind::Optimal, {}};
    if (text.rfind("file:", 0) == 0 && text.size() > 5) return {Kind::File, text.substr(5)};
    throw InputError("unknown strategy '" + text + "' (expected A, B, C, optimal or file:<path>)");
  }
};

/// Report for one strategy on convex_mixture(params), or on `table` when given
/// (then no region is attached). The first qubit is measured.
inline FidelityReport cmd_fidelity(const DepolarizingParams& params,
                                   const StrategySelector& selector,
                                   const std::optional<NoiseModel>& table = std::nullopt) {
  const std::size_t n = table ? table->num_qubits() : params.n;
  if (!table) params.validate();
  const auto partition = MeasurementPartition::first_qubit(n);

  if (selector.kind == StrategySelector::Kind::Optimal && !table) {
    return optimize_depolarizing(params);
  }
  const NoiseModel model = table ? *table : convex_mixture(params);
  FidelityReport report = [&] {
    switch (selector.kind) {
      case StrategySelector::Kind::A:
        return corrected_fidelity(model, partition, region_strategy(RegionLabel::Kind::A, n));
      case StrategySelector::Kind::B:
        return corrected_fidelity(model, partition, region_strategy(RegionLabel::Kind::B, n));
      case StrategySelector::Kind::C:
        return corrected_fidelity(model, partition, region_strategy(RegionLabel::Kind::C, n));
      case StrategySelector::Kind::File:
        return corrected_fidelity(model, partition,
                                  strategy_from_json(read_json_file(selector.path)));
      case StrategySelector::Kind::Optimal:
        break;
    }
    return optimize_recovery(model, partition);
  }();
  if (!table && n >= 2) report.region = classify_region(params);
  return report;
}

// ---------------------------------------------------------------- verify

struct VerifyFailure {
  std::size_t trial = 0;
  std::string check;
  double diff = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t n = 0;
  std::size_t checks = 0;
  double max_abs_diff = 0.0;
  std::vector<VerifyFailure> failures;

  bool ok() const { return failures.empty(); }
};

namespace detail {

inline NoiseModel random_table(std::size_t n, std::mt19937_64& rng) {
  const std::uint64_t space = std::uint64_t{1} << (2 * n);
  const std::uint64_t max_support = std::min<std::uint64_t>(space, 12);
  std::uniform_int_distribution<std::uint64_t> size_dist(1, max_support);
  std::uniform_int_distribution<std::uint64_t> index_dist(0, space - 1);
  std::exponential_distribution<double> weight_dist(1.0);
  const std::uint64_t support = size_dist(rng);
  std::vector<std::uint64_t> picked;
  while (picked.size() < support) {
    std::uint64_t idx = index_dist(rng);
    if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
  }
  std::vector<double> w(support);
  double total = 0.0;
  for (auto& x : w) {
    x = weight_dist(rng) + 1e-3;
    total += x;
  }
  std::vector<NoiseModel::Entry> entries;
  for (std::size_t k = 0; k < support; ++k) {
    entries.emplace_back(PauliString::from_index(picked[k], n), w[k] / total);
  }
  return NoiseModel::from_table(n, std::move(entries));
}

/// Random strategy mixing up to four outcome-matching corrections per outcome, plus
/// occasionally a correction that does not match the outcome.
inline RecoveryStrategy random_strategy(const MeasurementPartition& partition,
                                        std::mt19937_64& rng) {
  const std::size_t n = partition.num_qubits();
  const std::size_t free = partition.unmeasured().size();
  const std::uint64_t choices = std::uint64_t{1} << (2 * free);
  std::uniform_int_distribution<std::uint64_t> pick(0, choices - 1);
  std::uniform_int_distribution<int> count_dist(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> weight_dist(1.0);
  std::map<PauliString, RecoveryStrategy::Distribution> per_outcome;
  for (const PauliString& o : partition.outcomes()) {
    std::map<PauliString, double> raw;
    const int count = count_dist(rng);
    for (int c = 0; c < count; ++c) {
      std::uint64_t idx = pick(rng);
      std::vector<PauliIndex> f(n);
      for (std::size_t k = 0; k < partition.measured().size(); ++k) {
        f[partition.measured()[k]] = o[k];
      }
      for (std::size_t k = 0; k < free; ++k) {
        f[partition.unmeasured()[k]] = static_cast<PauliIndex>((idx >> (2 * k)) & 3u);
      }
      raw[PauliString(f)] += weight_dist(rng) + 1e-3;
    }
    if (unit(rng) < 0.25) {
      // Flip the first measured factor so the correction misses this branch.
      std::vector<PauliIndex> f(n, PauliIndex::Z);
      f[partition.measured()[0]] = static_cast<PauliIndex>((static_cast<int>(o[0]) + 1) % 4);
      raw[PauliString(f)] += weight_dist(rng) + 1e-3;
    }
    double total = 0.0;
    for (const auto& [g, w] : raw) total += w;
    auto& dist = per_outcome[o];
    for (const auto& [g, w] : raw) dist[g] = w / total;
  }
  return RecoveryStrategy(n, std::move(per_outcome));
}

}  // namespace detail

/// Cross-checks closed-form fidelities and the optimizer against the dense
/// oracle on random depolarizing mixtures and random noise tables.
inline VerifyReport cmd_verify(std::uint64_t seed, std::size_t trials, std::size_t n,
                               std::size_t oracle_cap = kDefaultDenseCap,
                               double tolerance = kOracleTolerance) {
  if (n < 1) {
    throw InputError("verify needs n >= 1");
  }
  if (oracle_cap > kMaxDenseCap || n > oracle_cap) {
    throw ResourceError("verify at n = " + std::to_string(n) + " exceeds the oracle cap of " +
                        std::to_string(std::min(oracle_cap, kMaxDenseCap)) +
                        " qubits (raise --oracle-cap, at most " + std::to_string(kMaxDenseCap) +
                        ")");
  }
  VerifyReport report{seed, trials, n, 0, 0.0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto partition = MeasurementPartition::first_qubit(n);

  auto record = [&](std::size_t trial, const std::string& check, double a, double b) {
    const double diff = std::abs(a - b);
    ++report.checks;
    report.max_abs_diff = std::max(report.max_abs_diff, diff);
    if (!(diff <= tolerance)) {
      report.failures.push_back(
          {trial, check, diff, format_number(a) + " vs " + format_number(b)});
    }
  };

  auto check_model = [&](std::size_t trial, const std::string& label, const NoiseModel& model) {
    try {
      FidelityReport best = optimize_recovery(model, partition);
      record(trial, label + ":optimal_vs_dense", best.total,
             entanglement_fidelity_dense(corrected_kraus(model, partition, best.strategy),
                                         oracle_cap));
      RecoveryStrategy rs = detail::random_strategy(partition, rng);
      record(trial, label + ":random_strategy_vs_dense",
             corrected_fidelity(model, partition, rs).total,
             entanglement_fidelity_dense(corrected_kraus(model, partition, rs), oracle_cap));
      if (n <= kBruteForceCap) {
        FidelityReport brute = brute_force_optimize(model, partition);
        record(trial, label + ":optimize_vs_brute_force", best.total, brute.total);
        ++report.checks;
        if (!(brute.strategy == best.strategy)) {
          report.failures.push_back({trial, label + ":strategy_mismatch", 0.0,
                                     strategy_to_json(best.strategy).dump() + " vs " +
                                         strategy_to_json(brute.strategy).dump()});
        }
      }
    } catch (const ConsistencyFault& e) {
      report.failures.push_back({trial, label + ":consistency_fault", 0.0, e.what()});
    }
  };

  for (std::size_t t = 0; t < trials; ++t) {
    const DepolarizingParams params{unit(rng), unit(rng), n};
    const NoiseModel mixture = convex_mixture(params);
    check_model(t, "mixture", mixture);
    if (n >= 2) {
      FidelityReport theory = theoretical_fidelity(params);
      if (theory.region->label.kind != RegionLabel::Kind::Boundary) {
        record(t, "mixture:theory_vs_optimize", theory.total,
               optimize_recovery(mixture, partition).total);
      }
    }
    check_model(t, "table", detail::random_table(n, rng));
  }
  return report;
}

inline json verify_report_to_json(const VerifyReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back(
        {{"trial", f.trial}, {"check", f.check}, {"diff", f.diff}, {"detail", f.detail}});
  }
  return {{"seed", report.seed},
          {"trials", report.trials},
          {"n", report.n},
          {"checks", report.checks},
          {"max_abs_diff", report.max_abs_diff},
          {"failures", failures}};
}

// ---------------------------------------------------------------- svg

/// A polyline for `line_plot`.
struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Minimal standalone SVG line plot.
inline std::string line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label, const std::vector<Series>& series) {
  double x0 = 1e300, x1 = -1e300, y0 = 0.0, y1 = 1.0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) {
    x0 = 0.0;
    x1 = 1.0;
  }
  const double w = 640, h = 480, m = 60;
  auto sx = [&](double x) { return m + (x - x0) / (x1 - x0) * (w - 2 * m); };
  auto sy = [&](double y) { return h - m - (y - y0) / (y1 - y0) * (h - 2 * m); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 15 << "\" text-anchor=\"middle\">" << x_label
      << " [" << format_number(x0) << ", " << format_number(x1) << "]</text>\n";
  out << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
      << ")\" text-anchor=\"middle\">" << y_label << " [" << format_number(y0) << ", "
      << format_number(y1) << "]</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = colors[k % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [x, y] : series[k].points) out << sx(x) << ',' << sy(y) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << w - m + 5 << "\" y=\"" << m + 18 * k << "\" fill=\"" << color
        << "\" font-size=\"12\">" << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string regions_svg(const std::vector<RegionRow>& rows) {
  std::vector<Series> series;
  std::map<std::size_t, std::size_t> slot;
  for (const auto& r : rows) {
    if (!slot.count(r.n)) {
      slot[r.n] = series.size();
      series.push_back({"n=" + std::to_string(r.n), {}});
    }
    auto& s = series[slot[r.n]];
    // Upper envelope of regions A and C: the threshold that applies at this p.
    if (r.mu_ab && (!r.mu_bc || *r.mu_ab >= *r.mu_bc)) {
      s.points.emplace_back(r.p, *r.mu_ab);
    } else if (r.mu_bc) {
      s.points.emplace_back(r.p, *r.mu_bc);
    }
  }
  return line_plot("Optimal recovery regions (A left, C right, B above)", "p", "mu", series);
}

inline std::string sweep_svg(const std::vector<SweepRow>& rows) {
  std::vector<Series> series;
  std::map<double, std::size_t> slot;
  for (const auto& r : rows) {
    if (!slot.count(r.mu)) {
      slot[r.mu] = series.size();
      series.push_back({"mu=" + format_number(r.mu), {}});
    }
    series[slot[r.mu]].points.emplace_back(static_cast<double>(r.n), r.f_optimized);
  }
  return line_plot("Optimal entanglement fidelity versus n", "n", "F", series);
}

}  // namespace corrfb
