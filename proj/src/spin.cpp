#include "gfflab/spin.hpp"

#include <cmath>
#include <ostream>

#include "gfflab/error.hpp"
#include "gfflab/unionfind.hpp"

namespace gfflab {

double SpinConfig::dot(int i, int j) const {
  double s = 0;
  for (int c = 0; c < N; ++c) s += at(i, c) * at(j, c);
  return s;
}

ConductanceField uniform_conductances(GraphPtr g, double beta) {
  require(beta >= 0, ErrorKind::InvalidArgument, "conductances must be nonnegative");
  ConductanceField C;
  C.domain = g;
  C.C.assign(g->edge_count(), beta);
  return C;
}

ConductanceField masked_conductances(GraphPtr g, const std::vector<char>& mask, double beta) {
  ConductanceField C = uniform_conductances(g, beta);
  for (int e = 0; e < g->edge_count(); ++e)
    if (!mask[g->edges()[e].u] || !mask[g->edges()[e].v]) C.C[e] = 0.0;
  return C;
}

namespace {
std::vector<double> uniform_sphere(int N, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<double> v(N);
  for (;;) {
    double n2 = 0;
    for (auto& x : v) {
      x = gauss(rng);
      n2 += x * x;
    }
    if (n2 > 1e-300) {
      double inv = 1.0 / std::sqrt(n2);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

double beta_variate(double a, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  double x = ga(rng), y = ga(rng);
  return x / (x + y);
}
}  // namespace

std::vector<double> sample_von_mises_fisher(const std::vector<double>& h, Rng& rng) {
  const int N = static_cast<int>(h.size());
  require(N >= 1, ErrorKind::InvalidArgument, "empty field vector");
  if (N == 1) {
    double p_plus = 1.0 / (1.0 + std::exp(-2.0 * h[0]));
    return {uniform01(rng) < p_plus ? 1.0 : -1.0};
  }
  double kappa = 0;
  for (double x : h) kappa += x * x;
  kappa = std::sqrt(kappa);
  if (kappa < 1e-12) return uniform_sphere(N, rng);
  std::vector<double> mu(N);
  for (int c = 0; c < N; ++c) mu[c] = h[c] / kappa;
  double w;
  if (N == 3) {
    double u = uniform_open(rng);
    w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
  } else {
    const double d1 = N - 1;
    const double b = d1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + d1 * d1));
    const double x0 = (1.0 - b) / (1.0 + b);
    const double c = kappa * x0 + d1 * std::log(1.0 - x0 * x0);
    for (;;) {
      double z = beta_variate(0.5 * d1, rng);
      w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
      if (kappa * w + d1 * std::log(1.0 - x0 * w) - c >= std::log(uniform_open(rng))) break;
    }
  }
  w = std::clamp(w, -1.0, 1.0);
  // tangent direction uniform on the sphere orthogonal to mu
  std::vector<double> t = uniform_sphere(N, rng);
  double proj = 0;
  for (int c = 0; c < N; ++c) proj += t[c] * mu[c];
  double tn = 0;
  for (int c = 0; c < N; ++c) {
    t[c] -= proj * mu[c];
    tn += t[c] * t[c];
  }
  tn = std::sqrt(tn);
  const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
  std::vector<double> out(N);
  for (int c = 0; c < N; ++c) out[c] = w * mu[c] + (tn > 0 ? s * t[c] / tn : 0.0);
  double n = 0;
  for (double x : out) n += x * x;
  n = 1.0 / std::sqrt(n);
  for (double& x : out) x *= n;
  return out;
}

SpinChain::SpinChain(ConductanceField C, int N, std::uint64_t seed, SpinChainOptions opts, std::optional<SpinConfig> init)
    : C_(std::move(C)), rng_(make_rng(seed, 0, 0x5b1)), opts_(std::move(opts)) {
  require(C_.domain != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(static_cast<int>(C_.C.size()) == C_.domain->edge_count(), ErrorKind::InvalidArgument,
          "one conductance per edge required");
  for (double c : C_.C) require(c >= 0 && std::isfinite(c), ErrorKind::InvalidArgument, "conductances must be finite and >= 0");
  require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
  const int n = C_.domain->size();
  if (opts_.active.empty()) opts_.active.assign(n, 1);
  require(static_cast<int>(opts_.active.size()) == n, ErrorKind::InvalidArgument, "active mask size mismatch");
  for (int i = 0; i < n; ++i)
    if (opts_.active[i]) active_sites_.push_back(i);
  if (init) {
    require(init->N == N && init->domain->size() == n, ErrorKind::InvalidArgument, "initial state mismatch");
    state_ = *init;
  } else {
    state_.domain = C_.domain;
    state_.N = N;
    state_.theta.assign(static_cast<size_t>(n) * N, 0.0);
    for (int i = 0; i < n; ++i) {
      auto v = uniform_sphere(N, rng_);
      if (N == 1) v[0] = v[0] >= 0 ? 1.0 : -1.0;
      for (int c = 0; c < N; ++c) state_.at(i, c) = v[c];
    }
  }
  in_cluster_.assign(n, 0);
}

void SpinChain::set_state(const SpinConfig& s) {
  require(s.N == state_.N && s.domain->size() == state_.domain->size(), ErrorKind::InvalidArgument, "state mismatch");
  state_ = s;
}

std::vector<double> SpinChain::local_field(int i) const {
  const auto& g = *C_.domain;
  const int N = state_.N;
  std::vector<double> h(N, 0.0);
  auto nb = g.neighbors(i);
  auto ie = g.incident_edges(i);
  for (size_t a = 0; a < nb.size(); ++a) {
    double c = C_.C[ie[a]];
    if (c == 0) continue;
    for (int k = 0; k < N; ++k) h[k] += c * state_.at(nb[a], k);
  }
  return h;
}

void SpinChain::heatbath_sweep() {
  const int N = state_.N;
  for (int i : active_sites_) {
    auto v = sample_von_mises_fisher(local_field(i), rng_);
    for (int c = 0; c < N; ++c) state_.at(i, c) = v[c];
  }
}

void SpinChain::overrelax_sweep() {
  const int N = state_.N;
  if (N == 1) return;
  for (int i : active_sites_) {
    auto h = local_field(i);
    double hn = 0, d = 0;
    for (int c = 0; c < N; ++c) {
      hn += h[c] * h[c];
      d += h[c] * state_.at(i, c);
    }
    if (hn < 1e-300) continue;
    for (int c = 0; c < N; ++c) state_.at(i, c) = 2.0 * d / hn * h[c] - state_.at(i, c);
  }
}

std::size_t SpinChain::wolff_move() {
  const auto& g = *C_.domain;
  const int N = state_.N;
  std::vector<double> r = N == 1 ? std::vector<double>{1.0} : uniform_sphere(N, rng_);
  int seed_site = active_sites_[std::min<std::size_t>(active_sites_.size() - 1,
                                                      static_cast<std::size_t>(uniform01(rng_) * active_sites_.size()))];
  auto project = [&](int i) {
    double p = 0;
    for (int c = 0; c < N; ++c) p += r[c] * state_.at(i, c);
    return p;
  };
  // projections are taken before the flip
  std::vector<int> members;
  std::vector<double> before;
  auto flip = [&](int i) {
    double p = project(i);
    for (int c = 0; c < N; ++c) state_.at(i, c) -= 2.0 * p * r[c];
    in_cluster_[i] = 1;
    members.push_back(i);
    before.push_back(p);
  };
  flip(seed_site);
  for (std::size_t head = 0; head < members.size(); ++head) {
    int i = members[head];
    double pi = before[head];
    auto nb = g.neighbors(i);
    auto ie = g.incident_edges(i);
    for (size_t a = 0; a < nb.size(); ++a) {
      int j = nb[a];
      if (in_cluster_[j] || !opts_.active[j]) continue;
      double c = C_.C[ie[a]];
      if (c == 0) continue;
      double x = -2.0 * c * pi * project(j);
      if (x >= 0) continue;
      if (uniform01(rng_) < -std::expm1(x)) flip(j);
    }
  }
  for (int m : members) in_cluster_[m] = 0;
  return members.size();
}

void SpinChain::wolff_sweep() {
  if (active_sites_.empty()) return;
  constexpr int kCalibrationSweeps = 20;
  if (wolff_moves_ > 0) {
    for (int k = 0; k < wolff_moves_; ++k) wolff_move();
    return;
  }
  std::size_t flipped = 0;
  long long moves = 0;
  while (flipped < active_sites_.size()) {
    flipped += wolff_move();
    ++moves;
  }
  calibration_moves_ += moves;
  if (++calibration_sweeps_ == kCalibrationSweeps)
    wolff_moves_ = std::max(1, static_cast<int>(std::lround(static_cast<double>(calibration_moves_) / kCalibrationSweeps)));
}

void SpinChain::sweep() {
  if (opts_.algorithm == SpinAlgorithm::Heatbath) {
    heatbath_sweep();
    for (int k = 0; k < opts_.overrelax; ++k) overrelax_sweep();
  } else {
    wolff_sweep();
    for (int k = 0; k < opts_.heatbath_mix; ++k) heatbath_sweep();
    for (int k = 0; k < opts_.overrelax; ++k) overrelax_sweep();
  }
}

void mcmc_spin(const ConductanceField& C, int N, const ChainSchedule& schedule, SpinAlgorithm algorithm,
               std::uint64_t seed, const std::function<void(const SpinConfig&)>& sink, int overrelax) {
  require(schedule.samples >= 1 && schedule.thin >= 1 && schedule.burn_in >= 0, ErrorKind::InvalidArgument,
          "sweeps must be >= 1");
  SpinChainOptions opts;
  opts.algorithm = algorithm;
  opts.overrelax = overrelax;
  SpinChain chain(C, N, seed, opts);
  for (int s = 0; s < schedule.burn_in; ++s) chain.sweep();
  for (int k = 0; k < schedule.samples; ++k) {
    for (int t = 0; t < schedule.thin; ++t) chain.sweep();
    sink(chain.state());
  }
}

std::pair<SpinConfig, ConductanceField> angles_of_gff(const VectorField& field) {
  const auto& g = *field.domain;
  SpinConfig s;
  s.domain = field.domain;
  s.N = field.N;
  s.theta.assign(field.values.size(), 0.0);
  std::vector<double> norm(g.size());
  for (int i = 0; i < g.size(); ++i) {
    norm[i] = std::sqrt(field.norm2(i));
    if (norm[i] == 0) {
      require(field.zeroset[i] != 0, ErrorKind::Degenerate,
              "field vanishes at a non-boundary site; angle undefined");
      s.at(i, 0) = 1.0;
      continue;
    }
    for (int c = 0; c < field.N; ++c) s.at(i, c) = field.at(i, c) / norm[i];
  }
  ConductanceField C;
  C.domain = field.domain;
  C.C.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) C.C[e] = norm[g.edges()[e].u] * norm[g.edges()[e].v];
  return {s, C};
}

std::pair<SpinConfig, ConductanceField> project_down(const SpinConfig& config, double beta) {
  require(config.N >= 2, ErrorKind::InvalidArgument, "projection needs N >= 2");
  require(beta > 0, ErrorKind::InvalidArgument, "beta must be positive");
  const auto& g = *config.domain;
  const int N = config.N;
  SpinConfig out;
  out.domain = config.domain;
  out.N = N - 1;
  out.theta.resize(static_cast<size_t>(g.size()) * (N - 1));
  std::vector<double> w(g.size());
  for (int i = 0; i < g.size(); ++i) {
    double tn = config.at(i, N - 1);
    double lower2 = 0;
    for (int c = 0; c < N - 1; ++c) lower2 += config.at(i, c) * config.at(i, c);
    require(std::abs(tn) < 1.0 && lower2 > 0, ErrorKind::Degenerate,
            "spin at the pole; projection is undefined");
    w[i] = std::sqrt(lower2);
    for (int c = 0; c < N - 1; ++c) out.at(i, c) = config.at(i, c) / w[i];
  }
  ConductanceField C;
  C.domain = config.domain;
  C.C.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) C.C[e] = beta * w[g.edges()[e].u] * w[g.edges()[e].v];
  return {out, C};
}

std::vector<double> rotation_to_north(const std::vector<double>& a) {
  const int N = static_cast<int>(a.size());
  require(N >= 2, ErrorKind::InvalidArgument, "rotation needs N >= 2");
  const double c = a[N - 1];
  require(c > -1.0 + 1e-14, ErrorKind::Degenerate, "antipodal spin: rotation to north is undefined");
  // R = I + K + K^2 / (1 + c) with K = n a^T - a n^T, n = e_N
  std::vector<double> K(static_cast<size_t>(N) * N, 0.0), R(static_cast<size_t>(N) * N, 0.0);
  for (int j = 0; j < N; ++j) {
    K[static_cast<size_t>(N - 1) * N + j] += a[j];
    K[static_cast<size_t>(j) * N + (N - 1)] -= a[j];
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double k2 = 0;
      for (int l = 0; l < N; ++l) k2 += K[static_cast<size_t>(i) * N + l] * K[static_cast<size_t>(l) * N + j];
      R[static_cast<size_t>(i) * N + j] = (i == j ? 1.0 : 0.0) + K[static_cast<size_t>(i) * N + j] + k2 / (1.0 + c);
    }
  return R;
}

SpinConfig rotate(const SpinConfig& config, const std::vector<double>& R) {
  const int N = config.N;
  require(R.size() == static_cast<size_t>(N) * N, ErrorKind::InvalidArgument, "rotation size mismatch");
  SpinConfig out = config;
  for (int s = 0; s < config.domain->size(); ++s)
    for (int i = 0; i < N; ++i) {
      double v = 0;
      for (int j = 0; j < N; ++j) v += R[static_cast<size_t>(i) * N + j] * config.at(s, j);
      out.at(s, i) = v;
    }
  return out;
}

SpinConfig north_root(const SpinConfig& config, int v) {
  std::vector<double> a(config.N);
  for (int c = 0; c < config.N; ++c) a[c] = config.at(v, c);
  SpinConfig out = rotate(config, rotation_to_north(a));
  for (int c = 0; c < config.N; ++c) out.at(v, c) = c == config.N - 1 ? 1.0 : 0.0;
  return out;
}

GradientTail::GradientTail(std::vector<int> edges, double beta, std::vector<double> K)
    : edges_(std::move(edges)), beta_(beta), K_(std::move(K)), per_sample_(K_.size()) {
  require(beta > 0, ErrorKind::InvalidArgument, "beta must be positive");
  require(!edges_.empty(), ErrorKind::InvalidArgument, "no edges to measure");
}

void GradientTail::add(const SpinConfig& s) {
  const auto& g = *s.domain;
  std::vector<long long> hits(K_.size(), 0);
  for (int e : edges_) {
    int u = g.edges()[e].u, v = g.edges()[e].v;
    double d2 = 0;
    for (int c = 0; c < s.N; ++c) {
      double d = s.at(u, c) - s.at(v, c);
      d2 += d * d;
    }
    double scaled = std::sqrt(d2 * beta_);
    for (size_t k = 0; k < K_.size(); ++k)
      if (scaled >= K_[k]) ++hits[k];
  }
  for (size_t k = 0; k < K_.size(); ++k)
    per_sample_[k].push_back(static_cast<double>(hits[k]) / static_cast<double>(edges_.size()));
}

std::vector<Estimate> GradientTail::tails() const {
  std::vector<Estimate> out;
  for (const auto& xs : per_sample_) out.push_back(batch_means(xs));
  return out;
}

int GradientTwoPoint::gap_of(const SiteGraph& g, int e1, int e2) {
  require(e1 >= 0 && e2 >= 0 && e1 < g.edge_count() && e2 < g.edge_count(), ErrorKind::InvalidArgument,
          "edge id out of range");
  if (e1 == e2) return -1;
  const auto& E1 = g.edges()[e1];
  const auto& E2 = g.edges()[e2];
  auto d1 = g.displacement(E1.u, E1.v), d2 = g.displacement(E2.u, E2.v);
  require(d1 == d2, ErrorKind::InvalidArgument, "edges are not parallel");
  int axis = d1[0] != 0 ? 0 : 1;
  auto off = g.displacement(E1.v, E2.u);
  require(off[1 - axis] == 0, ErrorKind::InvalidArgument, "edges are not on one lattice line");
  int gap = off[axis];
  if (g.topology() == Topology::Torus) gap = ((gap % g.period()) + g.period()) % g.period();
  if (gap < 0) gap = -gap - 2;  // e2 lies before e1
  require(gap >= 0, ErrorKind::InvalidArgument, "overlapping edges");
  require(gap % 2 == 0, ErrorKind::InvalidArgument, "edges must be at even distance");
  return gap;
}

GradientTwoPoint::GradientTwoPoint(GraphPtr torus, int gap, int component)
    : g_(std::move(torus)), component_(component) {
  require(g_->topology() == Topology::Torus, ErrorKind::InvalidGeometry, "translates need a torus");
  require(gap >= 0 && gap % 2 == 0, ErrorKind::InvalidArgument, "gap must be even and >= 0");
  require(gap + 2 < g_->period(), ErrorKind::InvalidGeometry, "gap too large for the torus");
  for (int s = 0; s < g_->size(); ++s) {
    Site p = g_->site(s);
    for (auto [dx, dy] : {std::array<int, 2>{1, 0}, std::array<int, 2>{0, 1}}) {
      Pair q;
      q.a0 = s;
      q.a1 = g_->index({p.x + dx, p.y + dy});
      q.b0 = g_->index({p.x + (gap + 1) * dx, p.y + (gap + 1) * dy});
      q.b1 = g_->index({p.x + (gap + 2) * dx, p.y + (gap + 2) * dy});
      pairs_.push_back(q);
    }
  }
}

GradientTwoPoint GradientTwoPoint::for_edges(GraphPtr g, int e1, int e2, int component) {
  gap_of(*g, e1, e2);
  GradientTwoPoint t;
  t.g_ = g;
  t.component_ = component;
  const auto& E1 = g->edges()[e1];
  const auto& E2 = g->edges()[e2];
  t.pairs_.push_back({E1.u, E1.v, E2.u, E2.v});
  return t;
}

double GradientTwoPoint::measure(int N, const std::function<double(int, int)>& get) const {
  double s = 0;
  long long n = 0;
  int c0 = component_ < 0 ? 0 : component_, c1 = component_ < 0 ? N : component_ + 1;
  for (const auto& q : pairs_)
    for (int c = c0; c < c1; ++c) {
      s += (get(q.a1, c) - get(q.a0, c)) * (get(q.b1, c) - get(q.b0, c));
      ++n;
    }
  return s / static_cast<double>(n);
}

void GradientTwoPoint::add(const SpinConfig& s) {
  samples_.push_back(measure(s.N, [&](int i, int c) { return s.at(i, c); }));
}

void GradientTwoPoint::add_field(const VectorField& f) {
  samples_.push_back(measure(f.N, [&](int i, int c) { return f.at(i, c); }));
}

double fk_domination_p(double beta_ising) {
  require(beta_ising > 0, ErrorKind::InvalidArgument, "beta must be positive");
  return std::tanh(beta_ising);
}

FKStats fk_ising(GraphPtr g, const std::vector<char>& mask_in, double beta_ising, const ChainSchedule& schedule,
                 std::uint64_t seed) {
  require(beta_ising > 0, ErrorKind::InvalidArgument, "beta must be positive");
  const int n = g->size();
  std::vector<char> mask = mask_in.empty() ? std::vector<char>(n, 1) : mask_in;
  require(static_cast<int>(mask.size()) == n, ErrorKind::InvalidArgument, "mask size mismatch");
  FKStats out;
  out.p_domination = fk_domination_p(beta_ising);
  for (char m : mask) out.active_sites += m != 0;
  if (out.active_sites == 0) return out;
  Rng rng = make_rng(seed, 0, 0xf6);
  const double p_bond = -std::expm1(-2.0 * beta_ising);
  std::vector<signed char> spin(n, 1);
  UnionFind uf(n);
  std::vector<signed char> flip(n);
  std::vector<double> giant, mag2;
  auto sweep = [&](bool measure) {
    uf.reset(n);
    for (const auto& e : g->edges())
      if (mask[e.u] && mask[e.v] && spin[e.u] == spin[e.v] && uniform01(rng) < p_bond) uf.unite(e.u, e.v);
    std::fill(flip.begin(), flip.end(), 0);
    int largest = 0;
    for (int i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      int r = uf.find(i);
      if (flip[r] == 0) flip[r] = uniform01(rng) < 0.5 ? -1 : 1;
      largest = std::max(largest, uf.size_of(r));
    }
    long long m = 0;
    for (int i = 0; i < n; ++i)
      if (mask[i]) {
        spin[i] = static_cast<signed char>(spin[i] * flip[uf.find(i)]);
        m += spin[i];
      }
    if (measure) {
      giant.push_back(static_cast<double>(largest) / out.active_sites);
      double mm = static_cast<double>(m) / out.active_sites;
      mag2.push_back(mm * mm);
    }
  };
  for (int s = 0; s < schedule.burn_in; ++s) sweep(false);
  for (int k = 0; k < schedule.samples; ++k) {
    for (int t = 1; t < schedule.thin; ++t) sweep(false);
    sweep(true);
  }
  out.giant = batch_means(giant);
  out.magnetization2 = batch_means(mag2);
  return out;
}

void save_spins(const SpinConfig& s, std::ostream& os) {
  VectorField f = make_field(s.domain, s.N);
  f.values = s.theta;
  save_field(f, os);
}

}  // namespace gfflab
