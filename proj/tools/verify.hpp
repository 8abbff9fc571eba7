#pragma once

#include <string>
#include <vector>

namespace crk::cli {

struct Check {
  std::string group;  // identity, orthogonality, vertex
  std::string name;
  int k = 0;
  double deviation = 0.0;
  double tol = 0.0;
  [[nodiscard]] bool pass() const { return deviation <= tol; }
};

/// Operator identities on the six-triangle L-shape mesh and one random
/// newest-vertex refinement of it, plus the orthogonality and vertex-value
/// identities, for each k.
std::vector<Check> verify_suite(const std::vector<int>& ks, unsigned seed);

}  // namespace crk::cli
