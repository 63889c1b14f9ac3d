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

// Walks mu across the two-qubit phase diagram at p = 0.4 and prints which
// recovery is optimal, its fidelity, and the dense-oracle value.

#include <cstdio>

#include "corrfb/corrfb.hpp"

int main() {
  using namespace corrfb;
  const double p = 0.4;
  const auto partition = MeasurementPartition::first_qubit(2);
  RegionInfo info = classify_region({p, 0.0, 2});
  std::printf("p = %.2f  mu_AB = %.6f\n", p, info.mu_ab);
  for (double mu : {0.0, 0.2, 0.3, 0.4, 0.6, 0.9, 1.0}) {
    const DepolarizingParams params{p, mu, 2};
    const NoiseModel model = convex_mixture(params);
    FidelityReport best = optimize_recovery(model, partition);
    const double dense =
        entanglement_fidelity_dense(corrected_kraus(model, partition, best.strategy));
    std::printf("mu = %.2f  region %-12s F = %.6f  oracle = %.6f  X -> %s\n", mu,
                classify_region(params).label.str().c_str(), best.total, dense,
                best.strategy.find(PauliString::parse("X"))->begin()->first.str().c_str());
  }
  return 0;
}
