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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corrfb/commands.hpp"

namespace corrfb::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kVerificationFailed = 2, kResourceCap = 3 };

namespace detail {

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) {
    throw InputError("cannot write '" + path + "'");
  }
  file << text;
  if (!file) {
    throw InputError("failed writing '" + path + "'");
  }
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InputError("unknown format '" + s + "'");
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feedback recovery of correlated Pauli noise with partial environment access",
               "corrfb"};
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  std::string svg_path;

  // regions
  auto* regions = app.add_subcommand("regions", "Region thresholds mu_AB and mu_BC versus p");
  std::vector<std::size_t> regions_n{2, 3, 4, 5};
  std::size_t p_steps = 401;
  regions->add_option("--n", regions_n, "Qubit counts (comma separated)")->delimiter(',');
  regions->add_option("--p-steps", p_steps, "Number of p grid points on [0, 1]");
  regions->add_option("--out", out_path, "Output file (default stdout)");
  regions->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  regions->add_option("--svg", svg_path, "Also write an SVG plot to this path");

  // sweep-n
  auto* sweep = app.add_subcommand("sweep-n", "Optimal fidelity versus number of qubits");
  double sweep_p = 0.4;
  std::vector<double> sweep_mu{0.9, 0.7, 0.5};
  std::size_t n_max = 12;
  std::size_t sweep_oracle_cap = kDefaultDenseCap;
  sweep->add_option("--p", sweep_p, "Error probability");
  sweep->add_option("--mu", sweep_mu, "Correlation values (comma separated)")->delimiter(',');
  sweep->add_option("--n-max", n_max, "Largest qubit count (starts at 2)");
  sweep->add_option("--oracle-cap", sweep_oracle_cap, "Fill F_oracle for n up to this value");
  sweep->add_option("--out", out_path, "Output file (default stdout)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--svg", svg_path, "Also write an SVG plot to this path");

  // fidelity
  auto* fidelity = app.add_subcommand("fidelity", "Fidelity report for one recovery strategy");
  double fid_p = 0.4, fid_mu = 0.0;
  std::size_t fid_n = 2;
  std::string selector = "optimal";
  std::string noise_file, dump_noise;
  fidelity->add_option("--p", fid_p, "Error probability");
  fidelity->add_option("--mu", fid_mu, "Correlation parameter");
  fidelity->add_option("--n", fid_n, "Number of qubits");
  fidelity->add_option("--strategy", selector, "A, B, C, optimal or file:<path>");
  fidelity->add_option("--noise-file", noise_file, "Noise table JSON replacing the mixture");
  fidelity->add_option("--dump-noise", dump_noise, "Write the noise table used as JSON");
  fidelity->add_option("--out", out_path, "Output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against the dense oracle");
  std::uint64_t seed = 42;
  std::size_t trials = 25, verify_n = 2;
  std::size_t verify_oracle_cap = kDefaultDenseCap;
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--trials", trials, "Number of random trials");
  verify->add_option("--n", verify_n, "Number of qubits");
  verify->add_option("--oracle-cap", verify_oracle_cap, "Dense oracle qubit cap (at most 6)");
  verify->add_option("--out", out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*regions) {
      SweepSpec spec;
      spec.p = SweepSpec::unit_grid(p_steps);
      spec.n = regions_n;
      spec.format = detail::parse_format(format);
      auto rows = cmd_regions(spec);
      detail::write_output(out_path,
                           spec.format == OutputFormat::Csv ? regions_csv(rows)
                                                            : regions_json(rows).dump(2) + "\n",
                           out);
      if (!svg_path.empty()) detail::write_output(svg_path, regions_svg(rows), out);
      return kOk;
    }
    if (*sweep) {
      if (n_max < 2) throw InputError("--n-max must be at least 2");
      SweepSpec spec;
      spec.p = {sweep_p};
      spec.mu = sweep_mu;
      for (std::size_t n = 2; n <= n_max; ++n) spec.n.push_back(n);
      spec.format = detail::parse_format(format);
      auto rows = cmd_sweep_n(spec, sweep_oracle_cap);
      detail::write_output(out_path,
                           spec.format == OutputFormat::Csv ? sweep_csv(rows)
                                                            : sweep_json(rows).dump(2) + "\n",
                           out);
      if (!svg_path.empty()) detail::write_output(svg_path, sweep_svg(rows), out);
      return kOk;
    }
    if (*fidelity) {
      const DepolarizingParams params{fid_p, fid_mu, fid_n};
      std::optional<NoiseModel> table;
      if (!noise_file.empty()) table = noise_model_from_json(read_json_file(noise_file));
      if (!dump_noise.empty()) {
        const NoiseModel used = table ? *table : convex_mixture(params);
        detail::write_output(dump_noise, noise_model_to_json(used).dump(2) + "\n", out);
      }
      FidelityReport report = cmd_fidelity(params, StrategySelector::parse(selector), table);
      detail::write_output(out_path, report_to_json(report).dump(2) + "\n", out);
      return kOk;
    }
    if (*verify) {
      VerifyReport report = cmd_verify(seed, trials, verify_n, verify_oracle_cap);
      detail::write_output(out_path, verify_report_to_json(report).dump(2) + "\n", out);
      return report.ok() ? kOk : kVerificationFailed;
    }
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ConsistencyFault& e) {
    err << "verification failure: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace corrfb::cli
