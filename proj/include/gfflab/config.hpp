#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gfflab/lattice.hpp"

namespace gfflab {

// Flat `key = value` file; lists are comma separated, `#` starts a comment.
struct ExperimentConfig {
  std::string experiment;
  std::string topology = "box";
  int window = 16;
  int N = 2;
  std::vector<double> beta{1.0};
  double R = 1.0;
  int k = 1;
  double epsilon = 0.5;
  std::vector<int> n{16};
  std::vector<double> m{0.05};
  std::vector<double> K{3, 4, 5};
  std::vector<int> distances{1, 2, 4};
  double p = 0.6;
  double beta_ising = 1.0;
  std::string observable;
  int replicas = 100;
  int sweeps = 1000;
  int burn_in = 100;
  int thin = 1;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  int workers = 1;
  Metric metric = Metric::L1;
  std::string palette = "hsv";
  // keys explicitly present in the file, for provenance
  std::map<std::string, std::string> given;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
// Cross-field checks (seed present, grids nonempty, known experiment).
void validate(const ExperimentConfig& c);
std::vector<std::string> known_experiments();

}  // namespace gfflab
