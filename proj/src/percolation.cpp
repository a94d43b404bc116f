#include "gfflab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gfflab/cable.hpp"
#include "gfflab/error.hpp"
#include "gfflab/parallel.hpp"
#include "gfflab/random.hpp"
#include "gfflab/spin.hpp"
#include "gfflab/unionfind.hpp"

namespace gfflab {

int ClusterLabeling::largest() const {
  int best = 0;
  for (int s : size) best = std::max(best, s);
  return best;
}

double ClusterLabeling::max_diameter() const {
  double best = 0;
  for (double d : diameter) best = std::max(best, d);
  return best;
}

namespace {

long long cross(const Site& o, const Site& a, const Site& b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

double euclidean_diameter(std::vector<Site> pts) {
  std::sort(pts.begin(), pts.end(), [](const Site& a, const Site& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return 0.0;
  std::vector<Site> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  double best = 0;
  for (size_t i = 0; i < hull.size(); ++i)
    for (size_t j = i + 1; j < hull.size(); ++j) {
      double dx = hull[i].x - hull[j].x, dy = hull[i].y - hull[j].y;
      best = std::max(best, dx * dx + dy * dy);
    }
  return std::sqrt(best);
}

struct Extent {
  int lo_s = std::numeric_limits<int>::max(), hi_s = std::numeric_limits<int>::min();
  int lo_d = std::numeric_limits<int>::max(), hi_d = std::numeric_limits<int>::min();
  int lo_x = std::numeric_limits<int>::max(), hi_x = std::numeric_limits<int>::min();
  int lo_y = std::numeric_limits<int>::max(), hi_y = std::numeric_limits<int>::min();
  void add(Site p) {
    lo_s = std::min(lo_s, p.x + p.y);
    hi_s = std::max(hi_s, p.x + p.y);
    lo_d = std::min(lo_d, p.x - p.y);
    hi_d = std::max(hi_d, p.x - p.y);
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
};

void unite_kjumps(const SiteGraph& g, const std::vector<char>& mask, int k, Metric metric, UnionFind& uf) {
  std::vector<std::array<int, 2>> offs;
  for (auto d : kjump_offsets(k, metric))
    if (d[0] > 0 || (d[0] == 0 && d[1] > 0)) offs.push_back(d);
  for (int i = 0; i < g.size(); ++i) {
    if (!mask[i]) continue;
    Site p = g.site(i);
    for (auto d : offs) {
      int j = g.index({p.x + d[0], p.y + d[1]});
      if (j >= 0 && mask[j]) uf.unite(i, j);
    }
  }
}

}  // namespace

ClusterLabeling clusters(GraphPtr g, const std::vector<char>& mask, int k, Metric metric) {
  require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
  require(static_cast<int>(mask.size()) == g->size(), ErrorKind::InvalidArgument, "mask size mismatch");
  UnionFind uf(g->size());
  unite_kjumps(*g, mask, k, metric, uf);
  ClusterLabeling out;
  out.domain = g;
  out.k = k;
  out.metric = metric;
  out.label.assign(g->size(), -1);
  std::vector<int> root_label(g->size(), -1);
  std::vector<Extent> ext;
  std::vector<std::vector<Site>> members;
  for (int i = 0; i < g->size(); ++i) {
    if (!mask[i]) continue;
    int r = uf.find(i);
    if (root_label[r] < 0) {
      root_label[r] = out.count();
      out.size.push_back(0);
      ext.emplace_back();
      if (metric == Metric::Euclidean) members.emplace_back();
    }
    int l = out.label[i] = root_label[r];
    ++out.size[l];
    ext[l].add(g->site(i));
    if (metric == Metric::Euclidean) members[l].push_back(g->site(i));
  }
  out.diameter.resize(out.count());
  for (int l = 0; l < out.count(); ++l) {
    const Extent& e = ext[l];
    switch (metric) {
      case Metric::L1: out.diameter[l] = std::max(e.hi_s - e.lo_s, e.hi_d - e.lo_d); break;
      case Metric::Linf: out.diameter[l] = std::max(e.hi_x - e.lo_x, e.hi_y - e.lo_y); break;
      case Metric::Euclidean: out.diameter[l] = euclidean_diameter(members[l]); break;
    }
  }
  return out;
}

std::vector<char> sublevel_mask(const std::vector<double>& norm2, double R) {
  std::vector<char> m(norm2.size());
  for (size_t i = 0; i < norm2.size(); ++i) m[i] = norm2[i] <= R * R;
  return m;
}

std::vector<double> norm2_of(const VectorField& f) {
  std::vector<double> out(f.domain->size());
  for (int i = 0; i < f.domain->size(); ++i) out[i] = f.norm2(i);
  return out;
}

std::vector<double> total_local_time(const LocalTimeField& L) {
  std::vector<double> out(L.domain->size());
  for (int i = 0; i < L.domain->size(); ++i) out[i] = L.total(i);
  return out;
}

bool annulus_crossing(const std::vector<double>& norm2, const Tessellation& t, int cell, double R, int k,
                      Metric metric) {
  require(cell >= 0 && cell < static_cast<int>(t.cells.size()), ErrorKind::InvalidArgument, "cell out of range");
  require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
  const auto& g = *t.window;
  std::vector<int> sites = t.annulus_sites(cell);
  std::vector<char> in(g.size(), 0), seen(g.size(), 0);
  for (int s : sites) in[s] = norm2[s] <= R * R;
  std::vector<int> stack;
  for (int s : sites)
    if (in[s] && t.linf_to_center(cell, s) <= t.n + k) {
      seen[s] = 1;
      stack.push_back(s);
    }
  auto offs = kjump_offsets(k, metric);
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    if (t.linf_to_center(cell, s) > t.outer - k) return true;
    Site p = g.site(s);
    for (auto d : offs) {
      int j = g.index({p.x + d[0], p.y + d[1]});
      if (j >= 0 && in[j] && !seen[j]) {
        seen[j] = 1;
        stack.push_back(j);
      }
    }
  }
  return false;
}

bool annulus_crossing_local(const LoopSoup& soup, const Tessellation& t, int cell, double R, int k, Metric metric) {
  require(soup.domain == t.window, ErrorKind::InvalidArgument, "soup and tessellation differ in domain");
  std::vector<char> region(t.window->size(), 0);
  for (int s : t.cell_sites(cell)) region[s] = 1;
  for (int s : t.annulus_sites(cell)) region[s] = 1;
  return annulus_crossing(total_local_time(local_time_within(soup, region)), t, cell, R, k, metric);
}

int CoarseProcess::max_diameter() const {
  int best = 0;
  for (int d : diameter) best = std::max(best, d);
  return best;
}

int CoarseProcess::largest() const {
  int best = 0;
  for (int s : size) best = std::max(best, s);
  return best;
}

bool CoarseProcess::spans() const {
  std::vector<char> left(size.size(), 0);
  for (int cy = 0; cy < tess->rows; ++cy) {
    int c = tess->cell_at(0, cy);
    if (label[c] >= 0) left[label[c]] = 1;
  }
  for (int cy = 0; cy < tess->rows; ++cy) {
    int c = tess->cell_at(tess->cols - 1, cy);
    if (label[c] >= 0 && left[label[c]]) return true;
  }
  return false;
}

double CoarseProcess::density() const {
  if (open.empty()) return 0;
  int c = 0;
  for (char o : open) c += o != 0;
  return static_cast<double>(c) / static_cast<double>(open.size());
}

CoarseProcess renormalize(const Tessellation& t, const std::vector<char>& open) {
  require(open.size() == t.cells.size(), ErrorKind::InvalidArgument, "one indicator per cell required");
  const int n = static_cast<int>(t.cells.size());
  UnionFind uf(n);
  for (int c = 0; c < n; ++c) {
    if (!open[c]) continue;
    for (int d : t.cell_neighbors(c))
      if (open[d]) uf.unite(c, d);
  }
  CoarseProcess out;
  out.tess = &t;
  out.open = open;
  out.label.assign(n, -1);
  std::vector<int> root_label(n, -1);
  std::vector<Extent> ext;
  for (int c = 0; c < n; ++c) {
    if (!open[c]) continue;
    int r = uf.find(c);
    if (root_label[r] < 0) {
      root_label[r] = static_cast<int>(out.size.size());
      out.size.push_back(0);
      ext.emplace_back();
    }
    int l = out.label[c] = root_label[r];
    ++out.size[l];
    ext[l].add({t.cells[c].cx, t.cells[c].cy});
  }
  for (const auto& e : ext) out.diameter.push_back(std::max(e.hi_s - e.lo_s, e.hi_d - e.lo_d));
  return out;
}

DecayFit fit_decay(const std::vector<DecayRow>& rows) {
  DecayFit f;
  f.rows = rows;
  std::vector<double> x, y, w;
  double wmax = 0;
  for (const auto& r : rows) {
    require(r.p >= 0 && r.p <= 1, ErrorKind::InvalidArgument, "probabilities must lie in [0,1]");
    if (r.p <= 0) {
      f.dropped.push_back(r.distance);
      continue;
    }
    x.push_back(r.distance);
    y.push_back(std::log(r.p));
    w.push_back(r.stderr_ > 0 ? (r.p * r.p) / (r.stderr_ * r.stderr_) : 0.0);
    wmax = std::max(wmax, w.back());
  }
  require(x.size() >= 2, ErrorKind::Degenerate, "decay fit needs at least two distances with nonzero estimates");
  for (double& wi : w)
    if (wi == 0) wi = wmax > 0 ? wmax : 1.0;
  LinearFit lf = linear_fit(x, y, w);
  f.rate = -lf.slope;
  f.rate_se = lf.slope_se;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  f.rate_ci = x.size() > 2 ? student_t_quantile(0.975, static_cast<double>(x.size() - 2)) * lf.slope_se
                           : std::numeric_limits<double>::infinity();
  return f;
}

DecayFit decay_scan(const std::vector<double>& distances, int replicas, std::uint64_t seed, int workers,
                    const std::function<std::vector<double>(std::uint64_t)>& replica) {
  require(replicas >= 1, ErrorKind::InvalidArgument, "replicas must be >= 1");
  require(!distances.empty(), ErrorKind::InvalidArgument, "empty distance grid");
  auto obs = parallel_map<std::vector<double>>(static_cast<std::size_t>(replicas), workers,
                                               [&](std::size_t r) { return replica(derive_seed(seed, r)); });
  std::vector<DecayRow> rows;
  for (size_t d = 0; d < distances.size(); ++d) {
    Accumulator acc;
    for (const auto& o : obs) {
      require(o.size() == distances.size(), ErrorKind::Runtime, "replica returned the wrong number of values");
      acc.add(o[d]);
    }
    rows.push_back({distances[d], acc.mean(), acc.stderr_of_mean()});
  }
  return fit_decay(rows);
}

std::vector<double> rooted_connectivity(const VectorField& rooted, const std::vector<int>& distances, double R, int k,
                                        Metric metric) {
  const auto& g = *rooted.domain;
  ClusterLabeling cl = clusters(rooted.domain, sublevel_mask(norm2_of(rooted), R), k, metric);
  int o = g.index({0, 0});
  require(o >= 0, ErrorKind::InvalidGeometry, "domain does not contain the origin");
  std::vector<double> out;
  for (int r : distances) {
    int hit = 0;
    for (auto [dx, dy] : {std::array<int, 2>{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) {
      int x = g.index({r * dx, r * dy});
      require(x >= 0, ErrorKind::InvalidGeometry, "distance exceeds the domain");
      hit += cl.connected(o, x);
    }
    out.push_back(hit / 4.0);
  }
  return out;
}

TailFit survival_fit(const std::vector<int>& cluster_sizes) {
  TailFit t;
  t.clusters = static_cast<int>(cluster_sizes.size());
  if (cluster_sizes.empty()) return t;
  std::vector<int> s = cluster_sizes;
  std::sort(s.begin(), s.end());
  const double total = static_cast<double>(s.size());
  std::vector<double> ly;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && s[i] == s[i - 1]) continue;
    t.sizes.push_back(s[i]);
    t.survival.push_back(static_cast<double>(s.size() - i) / total);
    ly.push_back(std::log(t.survival.back()));
  }
  if (t.sizes.size() >= 2) {
    t.fit = linear_fit(t.sizes, ly);
    t.rate = -t.fit.slope;
    t.rate_ci = t.sizes.size() > 2
                    ? student_t_quantile(0.975, static_cast<double>(t.sizes.size() - 2)) * t.fit.slope_se
                    : std::numeric_limits<double>::infinity();
  }
  return t;
}

double GmGraph::density() const {
  if (mask.empty()) return 0;
  long long c = 0;
  for (char m : mask) c += m != 0;
  return static_cast<double>(c) / static_cast<double>(mask.size());
}

GmGraph build_Gm(const VectorField& field, double beta) {
  require(beta >= 0, ErrorKind::InvalidArgument, "beta must be >= 0");
  GmGraph g;
  g.window = field.domain;
  g.m = field.mass;
  g.beta = beta;
  g.seed = field.seed;
  g.mask.resize(field.domain->size());
  for (int i = 0; i < field.domain->size(); ++i) g.mask[i] = field.norm2(i) > beta;
  return g;
}

std::vector<GmGraph> build_Gm_family(const LoopSoup& soup, const std::vector<double>& masses, double beta,
                                     std::uint64_t thinning_seed) {
  require(!masses.empty(), ErrorKind::InvalidArgument, "empty mass grid");
  require(beta >= 0, ErrorKind::InvalidArgument, "beta must be >= 0");
  std::vector<GmGraph> out;
  double prev = soup.mass;
  for (double m : masses) {
    require(m >= prev, ErrorKind::InvalidArgument, "mass grid must be increasing and >= the soup mass");
    prev = m;
    LocalTimeField L = local_time(massive_thinning(soup, m, thinning_seed));
    GmGraph g;
    g.window = soup.domain;
    g.m = m;
    g.beta = beta;
    g.seed = soup.seed;
    g.mask.resize(soup.domain->size());
    for (int i = 0; i < soup.domain->size(); ++i) g.mask[i] = L.total(i) > beta;
    out.push_back(std::move(g));
  }
  return out;
}

bool nested(const std::vector<GmGraph>& family) {
  for (size_t a = 1; a < family.size(); ++a) {
    require(family[a].mask.size() == family[a - 1].mask.size(), ErrorKind::InvalidArgument, "mask size mismatch");
    for (size_t i = 0; i < family[a].mask.size(); ++i)
      if (family[a].mask[i] && !family[a - 1].mask[i]) return false;
  }
  return true;
}

VectorField torus_to_window(const VectorField& tf) {
  const auto& t = *tf.domain;
  require(t.topology() == Topology::Torus, ErrorKind::InvalidGeometry, "expected a torus field");
  const int n = (t.period() - 1) / 2;
  GraphPtr w = build_window(n);
  VectorField f = make_field(w, tf.N);
  f.mass = tf.mass;
  f.seed = tf.seed;
  for (int i = 0; i < w->size(); ++i) {
    Site p = w->site(i);
    int j = t.index({p.x + n, p.y + n});
    for (int c = 0; c < tf.N; ++c) f.at(i, c) = tf.at(j, c);
  }
  return f;
}

ComplementTail complement_tail(const GmGraph& g, int k) {
  require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
  const auto& w = *g.window;
  std::vector<char> comp(w.size());
  long long cnt = 0;
  for (int i = 0; i < w.size(); ++i) cnt += (comp[i] = !g.mask[i]);
  ComplementTail out;
  out.complement_density = static_cast<double>(cnt) / w.size();
  ClusterLabeling cl = clusters(g.window, comp, k);
  out.tail = survival_fit(cl.size);
  out.largest = cl.largest();
  std::vector<char> nb(w.size(), 0);
  for (int i = 0; i < w.size(); ++i)
    if (comp[i])
      for (int j : kjump_ball(w, i, k)) nb[j] = 1;
  out.neighborhood_tail = survival_fit(clusters(g.window, nb, 1).size);
  return out;
}

BernoulliStats bernoulli_on_Gm(const GmGraph& g, double p, std::uint64_t seed) {
  require(p >= 0 && p <= 1, ErrorKind::InvalidArgument, "p must lie in [0,1]");
  const auto& w = *g.window;
  EdgeRefinement r;
  r.domain = g.window;
  r.seed = seed;
  r.values.assign(w.size(), 1.0);
  r.open.assign(w.edge_count(), 0);
  Rng rng = make_rng(seed, 0, 0xbe7);
  UnionFind uf(w.size());
  for (int e = 0; e < w.edge_count(); ++e) {
    double u = uniform01(rng);
    const auto& E = w.edges()[e];
    if (g.mask[E.u] && g.mask[E.v] && u < p) {
      r.open[e] = 1;
      uf.unite(E.u, E.v);
    }
  }
  BernoulliStats out;
  int gm = 0, best = 0;
  for (int i = 0; i < w.size(); ++i)
    if (g.mask[i]) {
      ++gm;
      best = std::max(best, uf.size_of(i));
    }
  out.largest_open = gm > 0 ? static_cast<double>(best) / gm : 0.0;
  const int xmin = w.min_x(), xmax = w.min_x() + w.width() - 1;
  std::vector<char> left(w.size(), 0);
  for (int i = 0; i < w.size(); ++i)
    if (g.mask[i] && w.site(i).x == xmin) left[uf.find(i)] = 1;
  for (int i = 0; i < w.size() && !out.spans; ++i)
    if (g.mask[i] && w.site(i).x == xmax && left[uf.find(i)]) out.spans = true;
  if (w.topology() != Topology::Annulus) {
    EquatorDual d(r);
    out.closed_largest = d.largest_inner_cluster();
    out.closed_crosses = d.crosses();
  }
  return out;
}

std::vector<Estimate> xy_two_point_on_Gm(const GmGraph& g, const std::vector<int>& distances,
                                         const ChainSchedule& schedule, std::uint64_t seed) {
  require(schedule.samples >= 1 && schedule.thin >= 1 && schedule.burn_in >= 0, ErrorKind::InvalidArgument,
          "sweeps must be >= 1");
  const auto& w = *g.window;
  struct P {
    int a, b;
  };
  std::vector<std::vector<P>> pairs(distances.size());
  for (size_t d = 0; d < distances.size(); ++d)
    for (int i = 0; i < w.size(); ++i) {
      if (!g.mask[i]) continue;
      Site s = w.site(i);
      for (auto [dx, dy] : {std::array<int, 2>{1, 0}, {0, 1}}) {
        int j = w.index({s.x + distances[d] * dx, s.y + distances[d] * dy});
        if (j >= 0 && g.mask[j]) pairs[d].push_back({i, j});
      }
    }
  SpinChainOptions opts;
  opts.overrelax = 1;
  opts.active = g.mask;
  SpinChain chain(masked_conductances(g.window, g.mask, g.beta), 2, seed, opts);
  for (int s = 0; s < schedule.burn_in; ++s) chain.sweep();
  std::vector<std::vector<double>> series(distances.size());
  for (int k = 0; k < schedule.samples; ++k) {
    for (int t = 0; t < schedule.thin; ++t) chain.sweep();
    const SpinConfig& s = chain.state();
    for (size_t d = 0; d < distances.size(); ++d) {
      if (pairs[d].empty()) continue;
      double acc = 0;
      for (const auto& q : pairs[d]) acc += s.dot(q.a, q.b);
      series[d].push_back(acc / static_cast<double>(pairs[d].size()));
    }
  }
  std::vector<Estimate> out;
  for (auto& xs : series) out.push_back(xs.empty() ? Estimate{} : batch_means(xs));
  return out;
}

}  // namespace gfflab
