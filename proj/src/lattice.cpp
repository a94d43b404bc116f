#include "gfflab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gfflab/error.hpp"

namespace gfflab {

const char* to_string(Topology t) {
  switch (t) {
    case Topology::Box: return "box";
    case Topology::Torus: return "torus";
    case Topology::Window: return "window";
    case Topology::Annulus: return "annulus";
  }
  return "?";
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::L1: return "l1";
    case Metric::Linf: return "linf";
    case Metric::Euclidean: return "euclidean";
  }
  return "?";
}

Metric parse_metric(const std::string_view& s) {
  if (s == "l1" || s == "L1") return Metric::L1;
  if (s == "linf" || s == "Linf") return Metric::Linf;
  if (s == "euclidean" || s == "l2" || s == "L2") return Metric::Euclidean;
  fail(ErrorKind::InvalidArgument, "unknown metric '" + std::string(s) + "'");
}

static int wrap(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

int SiteGraph::index(Site s) const {
  int x = s.x, y = s.y;
  if (topology_ == Topology::Torus) {
    x = wrap(x, period_);
    y = wrap(y, period_);
  }
  x -= min_x_;
  y -= min_y_;
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return -1;
  return lookup_[static_cast<size_t>(y) * width_ + x];
}

int SiteGraph::edge_between(int u, int v) const {
  auto nb = neighbors(u);
  auto ie = incident_edges(u);
  for (size_t a = 0; a < nb.size(); ++a)
    if (nb[a] == v) return ie[a];
  return -1;
}

std::vector<int> SiteGraph::boundary_sites() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (boundary_[i]) out.push_back(i);
  return out;
}

std::vector<int> SiteGraph::interior_sites() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (!boundary_[i]) out.push_back(i);
  return out;
}

std::array<int, 2> SiteGraph::displacement(int i, int j) const {
  int dx = sites_[j].x - sites_[i].x;
  int dy = sites_[j].y - sites_[i].y;
  if (topology_ == Topology::Torus) {
    dx = wrap(dx, period_);
    dy = wrap(dy, period_);
    if (dx > period_ / 2) dx -= period_;
    if (dy > period_ / 2) dy -= period_;
  }
  return {dx, dy};
}

double SiteGraph::distance(int i, int j, Metric m) const {
  auto d = displacement(i, j);
  int ax = std::abs(d[0]), ay = std::abs(d[1]);
  switch (m) {
    case Metric::L1: return ax + ay;
    case Metric::Linf: return std::max(ax, ay);
    case Metric::Euclidean: return std::hypot(ax, ay);
  }
  return 0;
}

void SiteGraph::finalize() {
  const int n = size();
  lookup_.assign(static_cast<size_t>(width_) * height_, -1);
  for (int i = 0; i < n; ++i)
    lookup_[static_cast<size_t>(sites_[i].y - min_y_) * width_ + (sites_[i].x - min_x_)] = i;
  edges_.clear();
  for (int i = 0; i < n; ++i) {
    for (auto [dx, dy] : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 1}}) {
      int j = index({sites_[i].x + dx, sites_[i].y + dy});
      if (j >= 0 && j != i) edges_.push_back({i, j});
    }
  }
  adj_off_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    adj_off_[e.u + 1]++;
    adj_off_[e.v + 1]++;
  }
  for (int i = 0; i < n; ++i) adj_off_[i + 1] += adj_off_[i];
  adj_.assign(adj_off_[n], 0);
  adj_edge_.assign(adj_off_[n], 0);
  std::vector<int> fill(adj_off_.begin(), adj_off_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    int u = edges_[e].u, v = edges_[e].v;
    adj_[fill[u]] = v;
    adj_edge_[fill[u]++] = e;
    adj_[fill[v]] = u;
    adj_edge_[fill[v]++] = e;
  }
  if (boundary_.size() != sites_.size()) boundary_.assign(n, 0);
}

std::shared_ptr<SiteGraph> SiteGraph::with_boundary(const std::vector<int>& sites) const {
  auto g = std::make_shared<SiteGraph>(*this);
  for (int s : sites) {
    require(s >= 0 && s < size(), ErrorKind::InvalidArgument, "boundary site out of range");
    g->boundary_[s] = 1;
  }
  return g;
}

std::shared_ptr<SiteGraph> SiteGraph::square(int n, Topology topo) {
  require(n >= 0, ErrorKind::InvalidGeometry, "box radius must be nonnegative");
  auto g = std::make_shared<SiteGraph>();
  g->topology_ = topo;
  g->radius_ = n;
  g->min_x_ = -n;
  g->min_y_ = -n;
  g->width_ = g->height_ = 2 * n + 1;
  g->sites_.reserve(static_cast<size_t>(g->width_) * g->height_);
  for (int y = -n; y <= n; ++y)
    for (int x = -n; x <= n; ++x) g->sites_.push_back({x, y});
  g->boundary_.assign(g->sites_.size(), 0);
  if (topo == Topology::Box)
    for (size_t i = 0; i < g->sites_.size(); ++i)
      g->boundary_[i] = std::max(std::abs(g->sites_[i].x), std::abs(g->sites_[i].y)) == n;
  g->finalize();
  return g;
}

std::shared_ptr<SiteGraph> build_box(int n) { return SiteGraph::square(n, Topology::Box); }

std::shared_ptr<SiteGraph> build_window(int n) { return SiteGraph::square(n, Topology::Window); }

std::shared_ptr<SiteGraph> build_torus(int n) {
  require(n >= 3, ErrorKind::InvalidGeometry, "torus side must be at least 3");
  auto g = std::make_shared<SiteGraph>();
  g->topology_ = Topology::Torus;
  g->radius_ = n;
  g->period_ = n;
  g->width_ = g->height_ = n;
  g->sites_.reserve(static_cast<size_t>(n) * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) g->sites_.push_back({x, y});
  g->boundary_.assign(g->sites_.size(), 0);
  g->finalize();
  return g;
}

std::shared_ptr<SiteGraph> build_annulus(double m, int n) {
  require(std::isfinite(m), ErrorKind::InvalidGeometry, "annulus radius must be finite");
  int mm = static_cast<int>(std::floor(m));
  require(n >= 0 && mm > n, ErrorKind::InvalidGeometry,
          "annulus needs outer radius > inner radius >= 0 (got " + std::to_string(mm) + ", " +
              std::to_string(n) + ")");
  auto g = std::make_shared<SiteGraph>();
  g->topology_ = Topology::Annulus;
  g->radius_ = mm;
  g->min_x_ = -mm;
  g->min_y_ = -mm;
  g->width_ = g->height_ = 2 * mm + 1;
  for (int y = -mm; y <= mm; ++y)
    for (int x = -mm; x <= mm; ++x)
      if (std::max(std::abs(x), std::abs(y)) > n) g->sites_.push_back({x, y});
  g->boundary_.assign(g->sites_.size(), 0);
  g->inner_.assign(g->sites_.size(), 0);
  for (size_t i = 0; i < g->sites_.size(); ++i) {
    int r = std::max(std::abs(g->sites_[i].x), std::abs(g->sites_[i].y));
    if (r == mm || r == n + 1) g->boundary_[i] = 1;
    if (r == n + 1) g->inner_[i] = 1;
  }
  g->finalize();
  return g;
}

std::vector<std::array<int, 2>> kjump_offsets(int k, Metric metric) {
  require(k >= 1, ErrorKind::InvalidArgument, "k must be at least 1");
  std::vector<std::array<int, 2>> out;
  for (int dy = -k; dy <= k; ++dy)
    for (int dx = -k; dx <= k; ++dx) {
      if (dx == 0 && dy == 0) continue;
      bool in = false;
      switch (metric) {
        case Metric::L1: in = std::abs(dx) + std::abs(dy) <= k; break;
        case Metric::Linf: in = true; break;
        case Metric::Euclidean: in = dx * dx + dy * dy <= k * k; break;
      }
      if (in) out.push_back({dx, dy});
    }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a[0] * a[0] + a[1] * a[1] < b[0] * b[0] + b[1] * b[1];
  });
  return out;
}

std::vector<int> kjump_ball(const SiteGraph& g, int x, int k, Metric metric) {
  std::vector<int> out{x};
  Site s = g.site(x);
  for (auto [dx, dy] : kjump_offsets(k, metric)) {
    int j = g.index({s.x + dx, s.y + dy});
    if (j >= 0 && std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
  }
  return out;
}

int Tessellation::cell_at(int cx, int cy) const {
  if (cx < 0 || cy < 0 || cx >= cols || cy >= rows) return -1;
  return cy * cols + cx;
}

std::vector<int> Tessellation::cell_neighbors(int c) const {
  std::vector<int> out;
  const Cell& cell = cells[c];
  for (auto [dx, dy] : {std::array<int, 2>{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    int j = cell_at(cell.cx + dx, cell.cy + dy);
    if (j >= 0) out.push_back(j);
  }
  return out;
}

int Tessellation::cell_distance(int a, int b) const {
  return std::abs(cells[a].cx - cells[b].cx) + std::abs(cells[a].cy - cells[b].cy);
}

int Tessellation::linf_to_center(int c, int site) const {
  int ci = window->index(cells[c].center);
  auto d = window->displacement(ci, site);
  return std::max(std::abs(d[0]), std::abs(d[1]));
}

std::vector<int> Tessellation::cell_sites(int c) const {
  std::vector<int> out;
  Site ctr = cells[c].center;
  for (int dy = -n; dy <= n; ++dy)
    for (int dx = -n; dx <= n; ++dx) {
      int j = window->index({ctr.x + dx, ctr.y + dy});
      if (j >= 0) out.push_back(j);
    }
  return out;
}

std::vector<int> Tessellation::annulus_sites(int c) const {
  std::vector<int> out;
  Site ctr = cells[c].center;
  for (int dy = -outer; dy <= outer; ++dy)
    for (int dx = -outer; dx <= outer; ++dx) {
      if (std::max(std::abs(dx), std::abs(dy)) <= n) continue;
      int j = window->index({ctr.x + dx, ctr.y + dy});
      if (j >= 0) out.push_back(j);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

static int floor_div(int a, int b) {
  int q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

int Tessellation::cell_of(int site) const {
  const int side = 2 * n + 1;
  Site s = window->site(site);
  auto locate = [&](int v, int count) {
    if (window->topology() == Topology::Torus) {
      int i = floor_div(v + n, side);
      if (i >= count) i = floor_div(v - window->period() + n, side);
      return i;
    }
    return floor_div(v + n, side) + (count - 1) / 2;
  };
  int c = cell_at(locate(s.x, cols), locate(s.y, rows));
  if (c < 0) return -1;
  return linf_to_center(c, site) <= n ? c : -1;
}

Tessellation tessellate(GraphPtr window, int n, const Site* root) {
  require(n >= 1, ErrorKind::InvalidArgument, "cell size n must be positive");
  require(window != nullptr, ErrorKind::InvalidArgument, "null window");
  Tessellation t;
  t.window = window;
  t.n = n;
  t.outer = (3 * n) / 2;
  const int side = 2 * n + 1;
  std::vector<int> centers;
  if (window->topology() == Topology::Torus) {
    int count = window->period() / side;
    require(count >= 1, ErrorKind::InvalidGeometry, "torus smaller than one cell");
    for (int i = 0; i < count; ++i) centers.push_back(i * side);
  } else {
    require(window->topology() != Topology::Annulus, ErrorKind::InvalidGeometry,
            "tessellation needs a box, window or torus");
    int h = window->topology() == Topology::Box ? window->radius() - 1 : window->radius();
    int imax = h >= n ? (h - n) / side : -1;
    require(imax >= 0, ErrorKind::InvalidGeometry, "window smaller than one cell");
    for (int i = -imax; i <= imax; ++i) centers.push_back(i * side);
  }
  t.cols = t.rows = static_cast<int>(centers.size());
  for (int cy = 0; cy < t.rows; ++cy)
    for (int cx = 0; cx < t.cols; ++cx) {
      Cell c;
      c.cx = cx;
      c.cy = cy;
      c.center = {centers[cx], centers[cy]};
      t.cells.push_back(c);
    }
  if (root) {
    int r = window->index(*root);
    require(r >= 0, ErrorKind::InvalidArgument, "root outside the window");
    for (size_t c = 0; c < t.cells.size(); ++c)
      t.cells[c].excluded = t.linf_to_center(static_cast<int>(c), r) <= t.outer;
  }
  return t;
}

}  // namespace gfflab
