#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace gfflab {

struct Site {
  int x = 0;
  int y = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

struct Edge {
  int u = 0;
  int v = 0;
};

enum class Topology { Box, Torus, Window, Annulus };
enum class Metric { L1, Linf, Euclidean };

const char* to_string(Topology t);
const char* to_string(Metric m);
Metric parse_metric(const std::string_view& s);

class SiteGraph {
 public:
  int size() const { return static_cast<int>(sites_.size()); }
  Site site(int i) const { return sites_[i]; }
  const std::vector<Site>& sites() const { return sites_; }

  // -1 when s is not a member; torus coordinates are wrapped.
  int index(Site s) const;
  bool contains(Site s) const { return index(s) >= 0; }

  std::span<const int> neighbors(int i) const {
    return {adj_.data() + adj_off_[i], adj_.data() + adj_off_[i + 1]};
  }
  std::span<const int> incident_edges(int i) const {
    return {adj_edge_.data() + adj_off_[i], adj_edge_.data() + adj_off_[i + 1]};
  }
  int degree(int i) const { return adj_off_[i + 1] - adj_off_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int edge_between(int u, int v) const;

  bool is_boundary(int i) const { return boundary_[i] != 0; }
  const std::vector<char>& boundary_mask() const { return boundary_; }
  std::vector<int> boundary_sites() const;
  std::vector<int> interior_sites() const;
  // Inner ring of an annulus; empty otherwise.
  bool is_inner_boundary(int i) const { return !inner_.empty() && inner_[i] != 0; }

  Topology topology() const { return topology_; }
  // Box/annulus radius, or torus side length.
  int radius() const { return radius_; }
  int period() const { return period_; }
  int min_x() const { return min_x_; }
  int min_y() const { return min_y_; }
  int width() const { return width_; }
  int height() const { return height_; }

  // Coordinate difference respecting torus wrap.
  std::array<int, 2> displacement(int i, int j) const;
  double distance(int i, int j, Metric m) const;

  // Marks the given sites as boundary (used for rooted tori).
  std::shared_ptr<SiteGraph> with_boundary(const std::vector<int>& sites) const;

  friend std::shared_ptr<SiteGraph> build_box(int n);
  friend std::shared_ptr<SiteGraph> build_window(int n);
  friend std::shared_ptr<SiteGraph> build_torus(int n);
  friend std::shared_ptr<SiteGraph> build_annulus(double m, int n);

 private:
  static std::shared_ptr<SiteGraph> square(int n, Topology topo);
  void finalize();

  std::vector<Site> sites_;
  std::vector<int> lookup_;
  std::vector<Edge> edges_;
  std::vector<int> adj_;
  std::vector<int> adj_edge_;
  std::vector<int> adj_off_;
  std::vector<char> boundary_;
  std::vector<char> inner_;
  Topology topology_ = Topology::Box;
  int radius_ = 0;
  int period_ = 0;
  int min_x_ = 0;
  int min_y_ = 0;
  int width_ = 0;
  int height_ = 0;
};

using GraphPtr = std::shared_ptr<const SiteGraph>;

// Lambda_n = [-n,n]^2 with the outer ring as boundary.
std::shared_ptr<SiteGraph> build_box(int n);
// Lambda_n with an empty boundary (free boundary conditions).
std::shared_ptr<SiteGraph> build_window(int n);
// Z^2 / nZ^2 with coordinates in [0,n); needs n >= 3.
std::shared_ptr<SiteGraph> build_torus(int n);
// Lambda_m \ Lambda_n, m truncated downward.
std::shared_ptr<SiteGraph> build_annulus(double m, int n);

// Offsets d with 0 < d(0,d) <= k, sorted by distance then coordinates.
std::vector<std::array<int, 2>> kjump_offsets(int k, Metric metric = Metric::L1);
// Member sites within distance k of x, x included.
std::vector<int> kjump_ball(const SiteGraph& g, int x, int k, Metric metric = Metric::L1);

struct Cell {
  Site center;
  int cx = 0;
  int cy = 0;
  bool excluded = false;
};

struct Tessellation {
  GraphPtr window;
  int n = 0;
  int outer = 0;
  int cols = 0;
  int rows = 0;
  std::vector<Cell> cells;

  int cell_at(int cx, int cy) const;
  std::vector<int> cell_neighbors(int c) const;
  int cell_distance(int a, int b) const;
  std::vector<int> cell_sites(int c) const;
  // Lambda_outer(center) \ Lambda_n(center), clipped to the window.
  std::vector<int> annulus_sites(int c) const;
  // Cell of a site, -1 outside every cell.
  int cell_of(int site) const;
  int linf_to_center(int c, int site) const;
};

// Cells of side 2n+1 centred at multiples of 2n+1, covering the window interior.
Tessellation tessellate(GraphPtr window, int n, const Site* root = nullptr);

}  // namespace gfflab
