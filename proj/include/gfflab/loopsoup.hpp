#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gfflab/harmonic.hpp"
#include "gfflab/lattice.hpp"

namespace gfflab {

// Labelled continuous-time random walk loops. Loop l visits visits[offsets[l] .. offsets[l+1])
// cyclically, spending holds[i] at each visit. Trivial (jumpless) loops are kept in aggregated form:
// per site and label a Gamma(1/2, 1) variate g, whose occupation at mass m is g / (deg + m^2).
struct LoopSoup {
  GraphPtr domain;
  std::vector<char> zeroset;
  int N = 1;
  double mass = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<int> visits;
  std::vector<double> holds;
  std::vector<std::uint16_t> labels;
  std::vector<double> durations;
  std::vector<std::uint64_t> ids;
  std::vector<double> trivial;

  std::size_t loop_count() const { return labels.size(); }
  std::size_t loop_size(std::size_t l) const { return offsets[l + 1] - offsets[l]; }
};

LoopSoup sample_soup(GraphPtr g, const std::vector<char>& zeroset, int N, double mass, std::uint64_t seed);

// Superposition of two soups on the same domain and mass.
LoopSoup merge_soups(const LoopSoup& a, const LoopSoup& b);

// Loops kept with probability exp(-(m^2 - m0^2) T) using marks fixed by (seed, loop id).
LoopSoup massive_thinning(const LoopSoup& soup, double m, std::uint64_t seed);

struct LocalTimeField {
  GraphPtr domain;
  int N = 1;
  // L[site * N + label]
  std::vector<double> L;

  double at(int site, int label) const { return L[static_cast<size_t>(site) * N + label]; }
  double total(int site) const;
};

// Twice the occupation time, so that E L(x) = G(x,x) per label and L has the law of phi^2.
LocalTimeField local_time(const LoopSoup& soup);
// Same, counting only loops that stay inside region.
LocalTimeField local_time_within(const LoopSoup& soup, const std::vector<char>& region);

// Edges traversed by at least one loop with the given label (0-based).
std::vector<char> crossed_edges(const LoopSoup& soup, int label);

// Probability, given the non-trivial loops, that thinning to mass m removes at least one loop
// (trivial loops integrated out exactly).
double coupling_failure_given(const LoopSoup& soup, double m);
// Exact P(some loop removed) = 1 - (det Q_m0 / det Q_m)^{N/2}.
double coupling_failure_exact(GraphPtr g, const std::vector<char>& zeroset, int N, double m0, double m);

void export_local_time_csv(const LocalTimeField& L, std::ostream& os);

}  // namespace gfflab
