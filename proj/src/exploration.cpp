#include "gfflab/exploration.hpp"

#include <cmath>
#include <ostream>

#include "gfflab/error.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/parallel.hpp"

namespace gfflab {

bool ExitSet::reaches(int r) const {
  for (int s : order) {
    Site p = domain->site(s);
    if (std::max(std::abs(p.x), std::abs(p.y)) <= r) return true;
  }
  return false;
}

ExitSet explore(const VectorField& field, double R, int k, bool stopped, Metric metric) {
  require(k >= 1, ErrorKind::InvalidArgument, "k must be at least 1");
  require(R >= 0, ErrorKind::InvalidArgument, "R must be nonnegative");
  const auto& g = *field.domain;
  require(!stopped || g.topology() == Topology::Box, ErrorKind::InvalidGeometry,
          "stopped exploration needs a box domain");
  ExitSet a;
  a.domain = field.domain;
  a.N = field.N;
  a.R = R;
  a.k = k;
  a.stopped = stopped;
  a.metric = metric;
  a.member.assign(g.size(), 0);
  a.absorbed.assign(g.size(), 0);
  const int half = g.radius() / 2;
  auto allowed = [&](int s) {
    if (!stopped) return true;
    Site p = g.site(s);
    return std::max(std::abs(p.x), std::abs(p.y)) > half;
  };
  const double R2 = R * R;
  std::vector<int> queue;
  auto visit = [&](int s) {
    a.member[s] = 1;
    a.order.push_back(s);
    if (field.norm2(s) > R2) a.absorbed[s] = 1;
    else queue.push_back(s);
  };
  for (int s = 0; s < g.size(); ++s)
    if (g.is_boundary(s) && allowed(s)) visit(s);
  require(!a.order.empty(), ErrorKind::InvalidGeometry, "exploration needs a nonempty boundary");
  const auto offsets = kjump_offsets(k, metric);
  for (size_t q = 0; q < queue.size(); ++q) {
    Site p = g.site(queue[q]);
    for (auto [dx, dy] : offsets) {
      int t = g.index({p.x + dx, p.y + dy});
      if (t < 0 || a.member[t] || !allowed(t)) continue;
      visit(t);
    }
  }
  a.values.reserve(a.order.size() * field.N);
  for (int s : a.order)
    for (int c = 0; c < field.N; ++c) a.values.push_back(field.at(s, c));
  return a;
}

void save_exit_set(const ExitSet& a, std::ostream& os) {
  const auto& g = *a.domain;
  os << "gfflab-exitset 1\n";
  os << "n " << g.radius() << "\nN " << a.N << "\nR " << a.R << "\nk " << a.k << "\nstopped " << a.stopped
     << "\nmetric " << to_string(a.metric) << "\n";
  os << "rle";
  char cur = 0;
  int run = 0;
  for (int s = 0; s < g.size(); ++s) {
    if (a.member[s] == cur) {
      ++run;
    } else {
      os << ' ' << run;
      cur = a.member[s];
      run = 1;
    }
  }
  os << ' ' << run << "\nvalues\n";
  os.precision(17);
  for (size_t i = 0; i < a.order.size(); ++i) {
    Site p = g.site(a.order[i]);
    os << p.x << ' ' << p.y;
    for (int c = 0; c < a.N; ++c) os << ' ' << a.values[i * a.N + c];
    os << '\n';
  }
}

Estimate reach_probability(const ExplorationParams& p, int replicas, std::uint64_t seed, int workers) {
  require(replicas >= 1, ErrorKind::InvalidArgument, "replicas must be >= 1");
  require(p.epsilon >= 0 && p.epsilon <= 1, ErrorKind::InvalidArgument, "epsilon must be in [0,1]");
  auto g = build_box(p.n);
  FieldSampler sampler(g, boundary_zeroset(*g), 0.0);
  const int inner = static_cast<int>(std::floor((1.0 - p.epsilon) * p.n));
  auto hits = parallel_map<char>(replicas, workers, [&](std::size_t r) -> char {
    Rng rng = make_rng(seed, r, 0xe1);
    VectorField f = sampler.sample(p.N, rng);
    return explore(f, p.R, p.k, false, p.metric).reaches(inner) ? 1 : 0;
  });
  long long s = 0;
  for (char h : hits) s += h;
  return binomial_estimate(s, replicas);
}

double phiA_sample(const VectorField& field, const ExitSet& a) {
  const auto& g = *field.domain;
  int root = g.index({0, 0});
  require(root >= 0, ErrorKind::InvalidGeometry, "domain must contain the origin");
  std::vector<char> prescribed(g.size(), 0);
  for (int s = 0; s < g.size(); ++s) prescribed[s] = a.member[s] || g.is_boundary(s);
  auto h = harmonic_value_at(g, prescribed, field.values, field.N, root);
  double n2 = 0;
  for (double v : h) n2 += v * v;
  return n2;
}

Estimate phiA_variance(const ExplorationParams& p, int replicas, std::uint64_t seed, int workers) {
  require(replicas >= 1, ErrorKind::InvalidArgument, "replicas must be >= 1");
  auto g = build_box(p.n);
  FieldSampler sampler(g, boundary_zeroset(*g), 0.0);
  auto xs = parallel_map<double>(replicas, workers, [&](std::size_t r) {
    Rng rng = make_rng(seed, r, 0xe2);
    VectorField f = sampler.sample(p.N, rng);
    return phiA_sample(f, explore(f, p.R, p.k, true, p.metric));
  });
  return mean_estimate(xs);
}

}  // namespace gfflab
