#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crk::cli {

struct RunConfig {
  std::string command;
  int k = 1;
  double theta = 0.5;
  long dof_cap = 100000;
  std::string problem = "lshape";
  std::string out = "crk-out";
  unsigned seed = 1;
  int quad_bump = 0;
  int steps = 10;
  bool timing = false;
  std::vector<int> verify_ks;  // empty: 1, 3, 5
};

/// Parses the command line and runs the command. Returns the exit code;
/// diagnostics go to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_afem(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_axioms(const RunConfig& cfg, std::ostream& out);

}  // namespace crk::cli
