#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gfflab/gff.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

struct ExitSet {
  GraphPtr domain;
  int N = 1;
  double R = 0;
  int k = 1;
  bool stopped = false;
  Metric metric = Metric::L1;
  std::vector<char> member;
  // Explored sites with ||phi|| > R; they belong to the set but do not propagate.
  std::vector<char> absorbed;
  std::vector<int> order;
  // N values per explored site, in discovery order.
  std::vector<double> values;

  int count() const { return static_cast<int>(order.size()); }
  // Some explored site lies in Lambda_r.
  bool reaches(int r) const;
};

ExitSet explore(const VectorField& field, double R, int k, bool stopped, Metric metric = Metric::L1);

// Run-length encoded membership mask followed by the value list.
void save_exit_set(const ExitSet& a, std::ostream& os);

struct ExplorationParams {
  int n = 16;
  int N = 2;
  double R = 1;
  int k = 1;
  double epsilon = 0.5;
  Metric metric = Metric::L1;
};

Estimate reach_probability(const ExplorationParams& p, int replicas, std::uint64_t seed, int workers = 1);

// ||phi_A(0)||^2 for the stopped exit set of one field.
double phiA_sample(const VectorField& field, const ExitSet& stopped_set);
Estimate phiA_variance(const ExplorationParams& p, int replicas, std::uint64_t seed, int workers = 1);

}  // namespace gfflab
