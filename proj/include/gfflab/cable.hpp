#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gfflab/gff.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/loopsoup.hpp"
#include "gfflab/spin.hpp"
#include "gfflab/unionfind.hpp"

namespace gfflab {

// Per-edge sign refinement of one field component on the cable graph: an edge is open when the
// bridge between its endpoint values has no zero.
struct EdgeRefinement {
  GraphPtr domain;
  int component = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // per site
  std::vector<char> open;      // per edge

  int open_count() const;
};

// P(no zero on a unit cable edge | endpoint values a, b) = 1 - exp(-2ab) for ab > 0, else 0.
double bridge_open_probability(double a, double b);

EdgeRefinement refine_signs(GraphPtr g, const std::vector<double>& values, std::uint64_t seed, int component = 0);
EdgeRefinement refine_field(const VectorField& f, int component, std::uint64_t seed);
// Cable extension of a spin configuration conditioned on |Phi| = sqrt(beta) at the vertices.
EdgeRefinement cable_on_extension(const SpinConfig& s, double beta, std::uint64_t seed, int component = 0);

// Clusters of {L~ > 0} for one label of a loop soup: an edge is open when a loop of that label
// crosses it, and otherwise with probability 1 - exp(-sqrt(L(u) L(v))). values = sqrt(L).
EdgeRefinement loop_soup_refinement(const LoopSoup& soup, int label, std::uint64_t seed);

class SignClusters {
 public:
  explicit SignClusters(const EdgeRefinement& r);
  // x == y counts as connected iff the value there is nonzero.
  bool connected(int x, int y) const;
  // -1 at zero sites
  int cluster_of(int x) const;
  int cluster_size(int x) const;
  int largest() const;

 private:
  const EdgeRefinement* r_;
  mutable UnionFind uf_;
};

bool same_sign_connected(const EdgeRefinement& r, int x, int y);

// Independent Rademacher sign per cluster times the site value.
std::vector<double> assign_cluster_signs(const EdgeRefinement& r, std::uint64_t seed);

// Dual edges crossing closed primal edges. Faces are unit squares named by their lower-left corner;
// on a box or window every edge on the rim also borders a single outer face.
class EquatorDual {
 public:
  explicit EquatorDual(const EdgeRefinement& r);
  int face_count() const { return faces_; }
  int outer_face() const { return outer_; }
  // -1 if the square is not a face
  int face_at(int x, int y) const;
  // Faces on either side of primal edge e.
  std::array<int, 2> dual_of(int e) const { return dual_[e]; }
  bool in_equator(int e) const { return closed_[e] != 0; }
  int equator_size() const;
  bool connected(int f1, int f2) const;
  // Faces in the largest Ê-cluster not touching the outer face.
  int largest_inner_cluster() const;
  // Dual path of Ê edges joining the left and right face columns without using the outer face.
  bool crosses() const;

 private:
  GraphPtr g_;
  int faces_ = 0;
  int outer_ = -1;
  int fw_ = 0, fh_ = 0;
  bool torus_ = false;
  std::vector<std::array<int, 2>> dual_;
  std::vector<char> closed_;
  mutable UnionFind uf_;       // all Ê edges
  mutable UnionFind inner_uf_; // Ê edges between inner faces only
};

// Bitmap of open edges with a header carrying (n, component, seed).
void save_refinement(const EdgeRefinement& r, std::ostream& os);

}  // namespace gfflab
