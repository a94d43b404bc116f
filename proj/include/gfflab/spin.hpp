#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "gfflab/gff.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/random.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

struct SpinConfig {
  GraphPtr domain;
  int N = 2;
  // theta[site * N + c]
  std::vector<double> theta;

  double at(int site, int c) const { return theta[static_cast<size_t>(site) * N + c]; }
  double& at(int site, int c) { return theta[static_cast<size_t>(site) * N + c]; }
  double dot(int i, int j) const;
};

struct ConductanceField {
  GraphPtr domain;
  // one entry per edge of the domain
  std::vector<double> C;
};

ConductanceField uniform_conductances(GraphPtr g, double beta);
// beta on edges with both endpoints in mask, 0 elsewhere.
ConductanceField masked_conductances(GraphPtr g, const std::vector<char>& mask, double beta);

enum class SpinAlgorithm { Heatbath, Wolff };

struct SpinChainOptions {
  SpinAlgorithm algorithm = SpinAlgorithm::Heatbath;
  // overrelaxation passes after each heatbath sweep
  int overrelax = 0;
  // in Wolff mode, also do this many heatbath sweeps per sweep (0 = pure cluster moves)
  int heatbath_mix = 0;
  // sites that are updated; empty means all
  std::vector<char> active;
};

class SpinChain {
 public:
  SpinChain(ConductanceField C, int N, std::uint64_t seed, SpinChainOptions opts = {},
            std::optional<SpinConfig> init = std::nullopt);
  // Heatbath: one pass over active sites. Wolff: cluster moves until as many sites as active sites
  // have been flipped.
  void sweep();
  const SpinConfig& state() const { return state_; }
  void set_state(const SpinConfig& s);

 private:
  void heatbath_sweep();
  void overrelax_sweep();
  void wolff_sweep();
  std::size_t wolff_move();
  std::vector<double> local_field(int site) const;

  ConductanceField C_;
  SpinConfig state_;
  Rng rng_;
  SpinChainOptions opts_;
  std::vector<int> active_sites_;
  std::vector<char> in_cluster_;
  // cluster moves per sweep, fixed after the calibration sweeps so that sweeps have a deterministic length
  int wolff_moves_ = 0;
  int calibration_sweeps_ = 0;
  long long calibration_moves_ = 0;
};

// Unit vector with density proportional to exp(h . theta) on S^{N-1}.
std::vector<double> sample_von_mises_fisher(const std::vector<double>& h, Rng& rng);

void mcmc_spin(const ConductanceField& C, int N, const ChainSchedule& schedule, SpinAlgorithm algorithm,
               std::uint64_t seed, const std::function<void(const SpinConfig&)>& sink,
               int overrelax = 0);

std::pair<SpinConfig, ConductanceField> angles_of_gff(const VectorField& field);
std::pair<SpinConfig, ConductanceField> project_down(const SpinConfig& config, double beta);

// Rotation R with R a = e_N for a unit vector a; row-major N x N.
std::vector<double> rotation_to_north(const std::vector<double>& a);
SpinConfig rotate(const SpinConfig& config, const std::vector<double>& R);
SpinConfig north_root(const SpinConfig& config, int v);

// Tail P(||theta(u) - theta(v)|| >= K / sqrt(beta)) over a set of edges, accumulated over a stream.
class GradientTail {
 public:
  GradientTail(std::vector<int> edges, double beta, std::vector<double> K);
  void add(const SpinConfig& s);
  std::vector<Estimate> tails() const;
  const std::vector<double>& K() const { return K_; }

 private:
  std::vector<int> edges_;
  double beta_;
  std::vector<double> K_;
  std::vector<std::vector<double>> per_sample_;
};

// E[grad theta^i(e1) grad theta^i(e2)] for aligned edges e1 = [a, a+1], e2 = [a+1+d, a+2+d] with d even.
class GradientTwoPoint {
 public:
  // All translates and both lattice directions of the pair with gap d on a torus.
  GradientTwoPoint(GraphPtr torus, int gap, int component = -1);
  // One explicit pair of edge ids; e1 == e2 gives the gradient variance.
  static GradientTwoPoint for_edges(GraphPtr g, int e1, int e2, int component = -1);
  // Gap between two aligned edges; throws on misaligned pairs or odd gaps.
  static int gap_of(const SiteGraph& g, int e1, int e2);
  void add(const SpinConfig& s);
  void add_field(const VectorField& f);
  Estimate estimate() const { return batch_means(samples_); }
  std::size_t pair_count() const { return pairs_.size(); }

 private:
  GradientTwoPoint() = default;
  struct Pair {
    int a0, a1, b0, b1;
  };
  double measure(int N, const std::function<double(int, int)>& get) const;
  GraphPtr g_;
  int component_ = -1;
  std::vector<Pair> pairs_;
  std::vector<double> samples_;
};

struct FKStats {
  Estimate giant;          // largest cluster / |active sites|
  Estimate magnetization2; // (sum of spins / |active|)^2
  double p_domination = 0;
  int active_sites = 0;
};

double fk_domination_p(double beta_ising);
FKStats fk_ising(GraphPtr g, const std::vector<char>& mask, double beta_ising, const ChainSchedule& schedule,
                 std::uint64_t seed);

void save_spins(const SpinConfig& s, std::ostream& os);

}  // namespace gfflab
