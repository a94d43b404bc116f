#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gfflab/gff.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/loopsoup.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

struct ClusterLabeling {
  GraphPtr domain;
  int k = 1;
  Metric metric = Metric::L1;
  std::vector<int> label;  // -1 off the mask, else 0..count-1
  std::vector<int> size;
  std::vector<double> diameter;

  int count() const { return static_cast<int>(size.size()); }
  bool connected(int x, int y) const { return label[x] >= 0 && label[x] == label[y]; }
  int largest() const;
  double max_diameter() const;
};

// Clusters of mask under k-jump adjacency; diameters in untwisted coordinates, same metric.
ClusterLabeling clusters(GraphPtr g, const std::vector<char>& mask, int k, Metric metric = Metric::L1);

// Sites whose squared norm (or local time) is at most R^2.
std::vector<char> sublevel_mask(const std::vector<double>& norm2, double R);
std::vector<double> norm2_of(const VectorField& f);
std::vector<double> total_local_time(const LocalTimeField& L);

// k-path inside the annulus of the cell, through sites with norm2 <= R^2, from within k of the
// inner box to within k of the outside.
bool annulus_crossing(const std::vector<double>& norm2, const Tessellation& t, int cell, double R, int k,
                      Metric metric = Metric::L1);
// Same, with the local field built only from loops that stay inside the cell's outer box.
bool annulus_crossing_local(const LoopSoup& soup, const Tessellation& t, int cell, double R, int k,
                            Metric metric = Metric::L1);

struct CoarseProcess {
  const Tessellation* tess = nullptr;
  std::vector<char> open;      // per cell
  std::vector<int> label;      // -1 closed
  std::vector<int> size;
  std::vector<int> diameter;   // L1 diameter in cell units
  int max_diameter() const;
  int largest() const;
  bool spans() const;
  double density() const;
};

CoarseProcess renormalize(const Tessellation& t, const std::vector<char>& open);

struct DecayRow {
  double distance = 0;
  double p = 0;
  double stderr_ = 0;
};

struct DecayFit {
  std::vector<DecayRow> rows;
  double rate = 0;       // minus the slope of log p against distance
  double rate_ci = 0;    // half-width of the 95% interval
  double rate_se = 0;
  double intercept = 0;
  double r2 = 0;
  std::vector<double> dropped;
};

// Weighted least squares of log p on distance; rows with p = 0 are dropped.
DecayFit fit_decay(const std::vector<DecayRow>& rows);

// One replica returns an observation per distance; replica r uses derive_seed(seed, r).
DecayFit decay_scan(const std::vector<double>& distances, int replicas, std::uint64_t seed, int workers,
                    const std::function<std::vector<double>(std::uint64_t)>& replica);

// Rooted plane field, connectivity of 0 to the axis points at distance r inside {|phi| <= R}.
std::vector<double> rooted_connectivity(const VectorField& rooted, const std::vector<int>& distances, double R,
                                        int k, Metric metric = Metric::L1);

struct TailFit {
  std::vector<double> sizes;     // s
  std::vector<double> survival;  // P(size >= s) over clusters
  LinearFit fit;                 // log survival against s
  double rate = 0;
  double rate_ci = 0;
  int clusters = 0;
};

TailFit survival_fit(const std::vector<int>& cluster_sizes);

struct GmGraph {
  GraphPtr window;
  double m = 0;
  double beta = 0;
  std::uint64_t seed = 0;
  std::vector<char> mask;
  double density() const;
};

GmGraph build_Gm(const VectorField& field, double beta);
// Coupled family over an increasing mass grid from one soup at the smallest mass.
std::vector<GmGraph> build_Gm_family(const LoopSoup& soup, const std::vector<double>& masses, double beta,
                                     std::uint64_t thinning_seed);
bool nested(const std::vector<GmGraph>& family);

// Torus field restricted to the largest centred window without wrap-around edges.
VectorField torus_to_window(const VectorField& torus_field);

struct ComplementTail {
  TailFit tail;
  TailFit neighborhood_tail;
  int largest = 0;
  double complement_density = 0;
};

ComplementTail complement_tail(const GmGraph& g, int k);

struct BernoulliStats {
  bool spans = false;          // open left-right crossing inside G_m
  double largest_open = 0;     // largest open cluster / |G_m|
  int closed_largest = 0;      // largest inner dual cluster of D_m
  bool closed_crosses = false; // D_m blocks top-bottom
};

BernoulliStats bernoulli_on_Gm(const GmGraph& g, double p, std::uint64_t seed);

// XY model at inverse temperature beta with conductances on G_m edges; E[theta(x).theta(x + r e1)]
// averaged over pairs with both ends in G_m, per distance.
std::vector<Estimate> xy_two_point_on_Gm(const GmGraph& g, const std::vector<int>& distances,
                                         const ChainSchedule& schedule, std::uint64_t seed);

}  // namespace gfflab
