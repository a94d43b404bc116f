#include "gfflab/loopsoup.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "gfflab/error.hpp"
#include "gfflab/random.hpp"

namespace gfflab {

namespace {

// Logarithmic(r) variate as a geometric mixture: y = 1 - (1-r)^U, then Geometric(1-y) on {1,2,..}.
long long logarithmic(double r, Rng& rng) {
  double y = -std::expm1(uniform_open(rng) * std::log1p(-r));
  if (y <= 0) return 1;
  double v = uniform_open(rng);
  return 1 + static_cast<long long>(std::floor(std::log(v) / std::log(y)));
}

}  // namespace

LoopSoup sample_soup(GraphPtr g, const std::vector<char>& zeroset, int N, double mass, std::uint64_t seed) {
  require(N >= 1 && N <= 65535, ErrorKind::InvalidArgument, "N out of range");
  auto problem = std::make_shared<DirichletProblem>(g, zeroset, mass);
  DirichletSolver solver(problem, SolverKind::Direct);
  const auto& fac = solver.factor();
  const auto& L = fac.matrixL().nestedExpression();
  const auto& perm = fac.permutationP().indices();
  const int m = problem->free_count();

  // step[site] = elimination position; loops rooted at v only visit sites eliminated no later than v.
  std::vector<int> step(g->size(), -1);
  std::vector<int> by_step(m);
  for (int k = 0; k < m; ++k) {
    int s = perm[k];
    step[problem->free_site(k)] = s;
    by_step[s] = problem->free_site(k);
  }

  LoopSoup soup;
  soup.domain = g;
  soup.zeroset = zeroset;
  soup.N = N;
  soup.mass = mass;
  soup.seed = seed;
  soup.trivial.assign(static_cast<size_t>(g->size()) * N, 0.0);

  Rng rng = make_rng(seed, 0, 0x100b);
  const double alpha = 0.5 * N;
  std::gamma_distribution<double> half_gamma(0.5, 1.0);
  std::vector<int> exc_sites;
  std::vector<double> exc_holds;
  std::uint64_t next_id = 0;

  for (int s = 0; s < m; ++s) {
    const int v = by_step[s];
    for (int c = 0; c < N; ++c) soup.trivial[static_cast<size_t>(v) * N + c] = half_gamma(rng);
    const double q = problem->diagonal(v);
    const double pivot = L.coeff(s, s) * L.coeff(s, s);
    // return probability of the walk killed outside {step <= s}
    const double r = std::max(0.0, 1.0 - pivot / q);
    if (r <= 0) continue;
    std::poisson_distribution<long long> count(-alpha * std::log1p(-r));
    const long long loops = count(rng);
    for (long long l = 0; l < loops; ++l) {
      const long long k = logarithmic(r, rng);
      double duration = 0;
      for (long long e = 0; e < k; ++e) {
        for (;;) {
          exc_sites.clear();
          exc_holds.clear();
          int u = v;
          bool ok = false;
          for (;;) {
            double qu = problem->diagonal(u);
            exc_sites.push_back(u);
            exc_holds.push_back(-std::log(uniform_open(rng)) / qu);
            double x = uniform01(rng) * qu;
            if (x >= static_cast<double>(g->degree(u))) break;  // killed by the mass
            int w = g->neighbors(u)[static_cast<int>(x)];
            if (w == v) {
              ok = true;
              break;
            }
            if (step[w] < 0 || step[w] > s) break;
            u = w;
          }
          if (ok) break;
        }
        for (size_t i = 0; i < exc_sites.size(); ++i) {
          soup.visits.push_back(exc_sites[i]);
          soup.holds.push_back(exc_holds[i]);
          duration += exc_holds[i];
        }
      }
      soup.offsets.push_back(soup.visits.size());
      soup.labels.push_back(static_cast<std::uint16_t>(std::min<double>(N - 1, uniform01(rng) * N)));
      soup.durations.push_back(duration);
      soup.ids.push_back(next_id++);
    }
  }
  return soup;
}

LoopSoup merge_soups(const LoopSoup& a, const LoopSoup& b) {
  require(a.domain == b.domain && a.N == b.N && a.mass == b.mass, ErrorKind::InvalidArgument,
          "merged soups must share domain, N and mass");
  LoopSoup out = a;
  const std::size_t base = out.visits.size();
  std::uint64_t id_shift = 0;
  for (auto id : a.ids) id_shift = std::max(id_shift, id + 1);
  for (std::size_t l = 0; l < b.loop_count(); ++l) {
    out.offsets.push_back(base + b.offsets[l + 1]);
    out.labels.push_back(b.labels[l]);
    out.durations.push_back(b.durations[l]);
    out.ids.push_back(id_shift + b.ids[l]);
  }
  out.visits.insert(out.visits.end(), b.visits.begin(), b.visits.end());
  out.holds.insert(out.holds.end(), b.holds.begin(), b.holds.end());
  for (size_t i = 0; i < out.trivial.size(); ++i) out.trivial[i] += b.trivial[i];
  return out;
}

LoopSoup massive_thinning(const LoopSoup& soup, double m, std::uint64_t seed) {
  require(m >= soup.mass, ErrorKind::InvalidArgument, "thinning can only increase the mass");
  if (m == soup.mass) return soup;
  const double dm2 = m * m - soup.mass * soup.mass;
  LoopSoup out;
  out.domain = soup.domain;
  out.zeroset = soup.zeroset;
  out.N = soup.N;
  out.mass = m;
  out.seed = soup.seed;
  out.trivial = soup.trivial;
  for (std::size_t l = 0; l < soup.loop_count(); ++l) {
    if (hashed_uniform(seed, soup.ids[l]) >= std::exp(-dm2 * soup.durations[l])) continue;
    out.visits.insert(out.visits.end(), soup.visits.begin() + soup.offsets[l], soup.visits.begin() + soup.offsets[l + 1]);
    out.holds.insert(out.holds.end(), soup.holds.begin() + soup.offsets[l], soup.holds.begin() + soup.offsets[l + 1]);
    out.offsets.push_back(out.visits.size());
    out.labels.push_back(soup.labels[l]);
    out.durations.push_back(soup.durations[l]);
    out.ids.push_back(soup.ids[l]);
  }
  return out;
}

double LocalTimeField::total(int site) const {
  double s = 0;
  for (int c = 0; c < N; ++c) s += at(site, c);
  return s;
}

LocalTimeField local_time_within(const LoopSoup& soup, const std::vector<char>& region) {
  const auto& g = *soup.domain;
  LocalTimeField out;
  out.domain = soup.domain;
  out.N = soup.N;
  out.L.assign(static_cast<size_t>(g.size()) * soup.N, 0.0);
  const double m2 = soup.mass * soup.mass;
  for (int x = 0; x < g.size(); ++x) {
    if (soup.zeroset[x] || (!region.empty() && !region[x])) continue;
    for (int c = 0; c < soup.N; ++c)
      out.L[static_cast<size_t>(x) * soup.N + c] = 2.0 * soup.trivial[static_cast<size_t>(x) * soup.N + c] / (g.degree(x) + m2);
  }
  for (std::size_t l = 0; l < soup.loop_count(); ++l) {
    if (!region.empty()) {
      bool inside = true;
      for (std::size_t i = soup.offsets[l]; i < soup.offsets[l + 1] && inside; ++i) inside = region[soup.visits[i]] != 0;
      if (!inside) continue;
    }
    const int c = soup.labels[l];
    for (std::size_t i = soup.offsets[l]; i < soup.offsets[l + 1]; ++i)
      out.L[static_cast<size_t>(soup.visits[i]) * soup.N + c] += 2.0 * soup.holds[i];
  }
  return out;
}

LocalTimeField local_time(const LoopSoup& soup) { return local_time_within(soup, {}); }

std::vector<char> crossed_edges(const LoopSoup& soup, int label) {
  const auto& g = *soup.domain;
  std::vector<char> out(g.edge_count(), 0);
  for (std::size_t l = 0; l < soup.loop_count(); ++l) {
    if (soup.labels[l] != label) continue;
    const std::size_t b = soup.offsets[l], e = soup.offsets[l + 1];
    for (std::size_t i = b; i < e; ++i) {
      int u = soup.visits[i], v = soup.visits[i + 1 < e ? i + 1 : b];
      int id = g.edge_between(u, v);
      if (id >= 0) out[id] = 1;
    }
  }
  return out;
}

double coupling_failure_given(const LoopSoup& soup, double m) {
  require(m >= soup.mass, ErrorKind::InvalidArgument, "thinning can only increase the mass");
  const auto& g = *soup.domain;
  const double dm2 = m * m - soup.mass * soup.mass;
  double log_keep = 0;
  for (double T : soup.durations) log_keep -= dm2 * T;
  const double alpha = 0.5 * soup.N;
  for (int x = 0; x < g.size(); ++x) {
    if (soup.zeroset[x]) continue;
    double q = g.degree(x) + soup.mass * soup.mass;
    log_keep += alpha * std::log(q / (q + dm2));
  }
  return -std::expm1(log_keep);
}

double coupling_failure_exact(GraphPtr g, const std::vector<char>& zeroset, int N, double m0, double m) {
  require(m >= m0, ErrorKind::InvalidArgument, "m must be >= m0");
  DirichletSolver a(std::make_shared<DirichletProblem>(g, zeroset, m0), SolverKind::Direct);
  DirichletSolver b(std::make_shared<DirichletProblem>(g, zeroset, m), SolverKind::Direct);
  return -std::expm1(0.5 * N * (a.log_det() - b.log_det()));
}

void export_local_time_csv(const LocalTimeField& L, std::ostream& os) {
  os << "x,y,label,local_time\n" << std::setprecision(17);
  for (int s = 0; s < L.domain->size(); ++s) {
    Site p = L.domain->site(s);
    for (int c = 0; c < L.N; ++c) os << p.x << ',' << p.y << ',' << c + 1 << ',' << L.at(s, c) << '\n';
  }
}

}  // namespace gfflab
