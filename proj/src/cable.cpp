#include "gfflab/cable.hpp"

#include <cmath>
#include <ostream>

#include "gfflab/error.hpp"
#include "gfflab/random.hpp"

namespace gfflab {

int EdgeRefinement::open_count() const {
  int c = 0;
  for (char o : open) c += o != 0;
  return c;
}

double bridge_open_probability(double a, double b) {
  const double ab = a * b;
  if (!(ab > 0)) return 0.0;
  return -std::expm1(-2.0 * ab);
}

EdgeRefinement refine_signs(GraphPtr g, const std::vector<double>& values, std::uint64_t seed, int component) {
  require(g != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(static_cast<int>(values.size()) == g->size(), ErrorKind::InvalidArgument, "one value per site required");
  EdgeRefinement r;
  r.domain = g;
  r.component = component;
  r.seed = seed;
  r.values = values;
  r.open.assign(g->edge_count(), 0);
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(component), 0xcab1e);
  for (int e = 0; e < g->edge_count(); ++e) {
    // one uniform per edge keeps the marks aligned across fields
    double u = uniform01(rng);
    const auto& E = g->edges()[e];
    r.open[e] = u < bridge_open_probability(values[E.u], values[E.v]);
  }
  return r;
}

EdgeRefinement refine_field(const VectorField& f, int component, std::uint64_t seed) {
  require(component >= 0 && component < f.N, ErrorKind::InvalidArgument, "component out of range");
  return refine_signs(f.domain, f.component(component), seed, component);
}

EdgeRefinement cable_on_extension(const SpinConfig& s, double beta, std::uint64_t seed, int component) {
  require(beta > 0, ErrorKind::InvalidArgument, "beta must be positive");
  require(component >= 0 && component < s.N, ErrorKind::InvalidArgument, "component out of range");
  std::vector<double> v(s.domain->size());
  const double sb = std::sqrt(beta);
  for (int i = 0; i < s.domain->size(); ++i) v[i] = sb * s.at(i, component);
  return refine_signs(s.domain, v, seed, component);
}

EdgeRefinement loop_soup_refinement(const LoopSoup& soup, int label, std::uint64_t seed) {
  require(label >= 0 && label < soup.N, ErrorKind::InvalidArgument, "label out of range");
  const auto& g = *soup.domain;
  LocalTimeField L = local_time(soup);
  std::vector<char> crossed = crossed_edges(soup, label);
  EdgeRefinement r;
  r.domain = soup.domain;
  r.component = label;
  r.seed = seed;
  r.values.resize(g.size());
  for (int i = 0; i < g.size(); ++i) r.values[i] = std::sqrt(L.at(i, label));
  r.open.assign(g.edge_count(), 0);
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(label), 0x100c);
  for (int e = 0; e < g.edge_count(); ++e) {
    double u = uniform01(rng);
    if (crossed[e]) {
      r.open[e] = 1;
      continue;
    }
    const auto& E = g.edges()[e];
    double a = r.values[E.u], b = r.values[E.v];
    r.open[e] = a * b > 0 && u < -std::expm1(-a * b);
  }
  return r;
}

SignClusters::SignClusters(const EdgeRefinement& r) : r_(&r), uf_(r.domain->size()) {
  const auto& g = *r.domain;
  for (int e = 0; e < g.edge_count(); ++e)
    if (r.open[e]) uf_.unite(g.edges()[e].u, g.edges()[e].v);
}

bool SignClusters::connected(int x, int y) const {
  if (r_->values[x] == 0 || r_->values[y] == 0) return false;
  return x == y || uf_.find(x) == uf_.find(y);
}

int SignClusters::cluster_of(int x) const { return r_->values[x] == 0 ? -1 : uf_.find(x); }

int SignClusters::cluster_size(int x) const { return r_->values[x] == 0 ? 0 : uf_.size_of(x); }

int SignClusters::largest() const {
  int best = 0;
  for (int i = 0; i < r_->domain->size(); ++i)
    if (r_->values[i] != 0) best = std::max(best, uf_.size_of(i));
  return best;
}

bool same_sign_connected(const EdgeRefinement& r, int x, int y) {
  const auto& g = *r.domain;
  require(x >= 0 && y >= 0 && x < g.size() && y < g.size(), ErrorKind::InvalidArgument, "site out of range");
  return SignClusters(r).connected(x, y);
}

std::vector<double> assign_cluster_signs(const EdgeRefinement& r, std::uint64_t seed) {
  SignClusters cl(r);
  std::vector<double> out(r.values.size());
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    int c = cl.cluster_of(i);
    if (c < 0) continue;
    double sign = hashed_uniform(seed, static_cast<std::uint64_t>(c)) < 0.5 ? -1.0 : 1.0;
    out[i] = sign * std::abs(r.values[i]);
  }
  return out;
}

EquatorDual::EquatorDual(const EdgeRefinement& r) : g_(r.domain) {
  const auto& g = *g_;
  require(g.topology() != Topology::Annulus, ErrorKind::InvalidGeometry, "equator dual needs a square domain");
  torus_ = g.topology() == Topology::Torus;
  fw_ = torus_ ? g.period() : g.width() - 1;
  fh_ = torus_ ? g.period() : g.height() - 1;
  require(fw_ >= 1 && fh_ >= 1, ErrorKind::InvalidGeometry, "domain has no faces");
  faces_ = fw_ * fh_;
  outer_ = torus_ ? -1 : faces_;
  const int total = faces_ + (torus_ ? 0 : 1);
  uf_.reset(total);
  inner_uf_.reset(total);
  closed_.resize(g.edge_count());
  dual_.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.edges()[e].u, v = g.edges()[e].v;
    auto d = g.displacement(u, v);
    if (d[0] < 0 || d[1] < 0) std::swap(u, v);
    Site p = g.site(u);
    std::array<int, 2> f;
    if (d[1] == 0) f = {face_at(p.x, p.y), face_at(p.x, p.y - 1)};
    else f = {face_at(p.x, p.y), face_at(p.x - 1, p.y)};
    for (int& x : f)
      if (x < 0) x = outer_;
    dual_[e] = f;
    closed_[e] = !r.open[e];
    if (!closed_[e]) continue;
    uf_.unite(f[0], f[1]);
    if (f[0] == outer_ || f[1] == outer_) continue;
    if (torus_) {
      int x0 = f[0] % fw_, x1 = f[1] % fw_, y0 = f[0] / fw_, y1 = f[1] / fw_;
      if (std::abs(x0 - x1) > 1 || std::abs(y0 - y1) > 1) continue;
    }
    inner_uf_.unite(f[0], f[1]);
  }
}

int EquatorDual::face_at(int x, int y) const {
  const auto& g = *g_;
  if (torus_) {
    int n = g.period();
    x = ((x % n) + n) % n;
    y = ((y % n) + n) % n;
    return y * fw_ + x;
  }
  int fx = x - g.min_x(), fy = y - g.min_y();
  if (fx < 0 || fy < 0 || fx >= fw_ || fy >= fh_) return -1;
  return fy * fw_ + fx;
}

int EquatorDual::equator_size() const {
  int c = 0;
  for (char x : closed_) c += x != 0;
  return c;
}

bool EquatorDual::connected(int f1, int f2) const { return f1 == f2 || uf_.find(f1) == uf_.find(f2); }

int EquatorDual::largest_inner_cluster() const {
  int best = 0;
  for (int f = 0; f < faces_; ++f) {
    if (!torus_ && uf_.find(f) == uf_.find(outer_)) continue;
    best = std::max(best, inner_uf_.size_of(f));
  }
  return best;
}

bool EquatorDual::crosses() const {
  std::vector<char> left(faces_ + 1, 0);
  for (int y = 0; y < fh_; ++y) left[inner_uf_.find(y * fw_)] = 1;
  for (int y = 0; y < fh_; ++y)
    if (left[inner_uf_.find(y * fw_ + fw_ - 1)]) return true;
  return false;
}

void save_refinement(const EdgeRefinement& r, std::ostream& os) {
  const auto& g = *r.domain;
  os << "gfflab-edges 1\n";
  os << "topology " << to_string(g.topology()) << '\n';
  os << "n " << g.radius() << '\n';
  os << "component " << r.component + 1 << '\n';
  os << "seed " << r.seed << '\n';
  os << "edges " << g.edge_count() << '\n';
  os << "end\n";
  std::vector<unsigned char> bits((g.edge_count() + 7) / 8, 0);
  for (int e = 0; e < g.edge_count(); ++e)
    if (r.open[e]) bits[e / 8] |= static_cast<unsigned char>(1u << (e % 8));
  os.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  require(static_cast<bool>(os), ErrorKind::Io, "failed writing edge bitmap");
}

}  // namespace gfflab
