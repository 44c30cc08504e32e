#pragma once

#include <compare>
#include <vector>

namespace spinrecon {

// Joint outcome of a product measurement: i is the system sign (+1/-1),
// k the assistant label (photon number, or +1/-1 for a spin assistant).
struct JointOutcome {
  int i = 0;
  int k = 0;
  auto operator<=>(const JointOutcome&) const = default;
};

struct JointDistribution {
  std::vector<JointOutcome> outcomes;
  std::vector<double> probabilities;
  double truncation_deficit = 0.0;  // mass dropped by a finite Fock space, if any
};

}  // namespace spinrecon
