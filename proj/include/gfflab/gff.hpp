#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gfflab/harmonic.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/random.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

struct VectorField {
  GraphPtr domain;
  int N = 1;
  double mass = 0;
  std::uint64_t seed = 0;
  std::vector<char> zeroset;
  // site-major: values[site * N + c]
  std::vector<double> values;

  double at(int site, int c) const { return values[static_cast<size_t>(site) * N + c]; }
  double& at(int site, int c) { return values[static_cast<size_t>(site) * N + c]; }
  double norm2(int site) const;
  std::vector<double> component(int c) const;
};

VectorField make_field(GraphPtr g, int N, std::vector<char> zeroset = {});

// Exact sampler: x = P^-1 L^-T z for the Cholesky factor of the Dirichlet operator.
class FieldSampler {
 public:
  FieldSampler(GraphPtr g, std::vector<char> zeroset, double mass);
  explicit FieldSampler(std::shared_ptr<const DirichletSolver> solver);
  VectorField sample(int N, Rng& rng) const;
  const DirichletSolver& solver() const { return *solver_; }

 private:
  std::shared_ptr<const DirichletSolver> solver_;
};

// Spectral sampler on the n-torus; rooted fields are pinned to 0 at the origin (m = 0 only).
class SpectralTorusSampler {
 public:
  SpectralTorusSampler(int n, double mass, bool rooted);
  ~SpectralTorusSampler();
  SpectralTorusSampler(const SpectralTorusSampler&) = delete;
  SpectralTorusSampler& operator=(const SpectralTorusSampler&) = delete;

  VectorField sample(int N, Rng& rng) const;
  // Fills one or two real planes of size n*n (row-major) from a single complex transform.
  void sample_planes(Rng& rng, double* re, double* im) const;
  const GraphPtr& graph() const { return graph_; }
  int n() const { return n_; }

 private:
  int n_;
  double mass_;
  bool rooted_;
  GraphPtr graph_;
  std::vector<double> scale_;
  void* plan_ = nullptr;
};

VectorField sample_gff(GraphPtr g, int N, double mass, const std::vector<char>& zeroset, std::uint64_t seed);
// Rooted field on the n-torus with zeroset {0}.
VectorField sample_rooted_plane(int n, int N, std::uint64_t seed);

void save_field(const VectorField& f, std::ostream& os);
void save_field(const VectorField& f, const std::string& path);
VectorField load_field(std::istream& is);
VectorField load_field(const std::string& path);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

// Per-site admissible sets: a finite union of intervals, or a pin at one value.
struct Band {
  std::vector<Interval> intervals{Interval{}};
  bool pinned = false;
  double pin = 0;

  static Band whole() { return Band{}; }
  static Band pin_at(double v) { return Band{{}, true, v}; }
  static Band interval(double lo, double hi) { return Band{{Interval{lo, hi}}, false, 0}; }
  bool bounded() const;
  bool contains(double v) const;
  // Point of the band closest to v.
  double closest(double v) const;
};

struct BandSpec {
  GraphPtr graph;
  std::vector<Band> bands;
};

// Unconstrained interior with zero pins on the graph boundary.
BandSpec boundary_pinned_bands(GraphPtr g);

// Draws from N(mean, sd^2) restricted to a union of intervals by inverse CDF.
double truncated_normal(double mean, double sd, const std::vector<Interval>& parts, Rng& rng);

class ConditionedGibbs {
 public:
  ConditionedGibbs(BandSpec spec, std::uint64_t seed);
  void sweep();
  const VectorField& state() const { return state_; }
  std::uint64_t sweeps_done() const { return sweeps_; }

 private:
  BandSpec spec_;
  VectorField state_;
  Rng rng_;
  std::uint64_t sweeps_ = 0;
};

struct ChainSchedule {
  int burn_in = 100;
  int samples = 100;
  int thin = 1;
};

// Calls sink on each retained state of a single-site Gibbs chain.
void sample_conditioned(const BandSpec& spec, const ChainSchedule& schedule, std::uint64_t seed,
                        const std::function<void(const VectorField&)>& sink);

struct FluctuationProbe {
  GraphPtr graph;
  int N = 2;
  double level = 1;
  std::vector<char> below;  // V_<= : ||phi|| <= level
  std::vector<char> above;  // V_>  : ||phi|| > level
  int site = 0;
  int p = 1;
};

// MC estimate of E[||phi(v)||^{2p} | K] by a norm-banded Gibbs chain (zero boundary).
Estimate fluctuation_tail_probe(const FluctuationProbe& probe, const ChainSchedule& schedule,
                                std::uint64_t seed, int max_tries = 200);

}  // namespace gfflab
