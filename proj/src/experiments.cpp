#include "gfflab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "gfflab/cable.hpp"
#include "gfflab/error.hpp"
#include "gfflab/exploration.hpp"
#include "gfflab/gff.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/loopsoup.hpp"
#include "gfflab/parallel.hpp"
#include "gfflab/percolation.hpp"
#include "gfflab/random.hpp"
#include "gfflab/spin.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

const char* version_string() { return GFFLAB_VERSION_STRING; }

namespace {

using json = nlohmann::ordered_json;

class Recorder {
 public:
  Recorder(const ExperimentConfig& c) : c_(c), start_(std::chrono::steady_clock::now()) {}

  void add(const std::string& observable, json params, Estimate e) { add(observable, std::move(params), e.mean, e.stderr_, e.samples); }

  void add(const std::string& observable, json params, double estimate, double se, long long replicas) {
    ResultRecord r;
    r.experiment = c_.experiment;
    r.params = std::move(params);
    r.observable = observable;
    r.estimate = estimate;
    r.stderr_ = se;
    r.replicas = replicas;
    r.seed = *c_.seed;
    r.version = version_string();
    out_.push_back(std::move(r));
  }

  std::vector<ResultRecord> finish() {
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    for (auto& r : out_) r.wall_time = wall;
    return std::move(out_);
  }

 private:
  const ExperimentConfig& c_;
  std::chrono::steady_clock::time_point start_;
  std::vector<ResultRecord> out_;
};

// series[chain][observable][sample]
using ChainSeries = std::vector<std::vector<std::vector<double>>>;

ChainSeries run_chains(const ConductanceField& C, int N, const SpinChainOptions& opts, const ExperimentConfig& c,
                       std::uint64_t seed, int workers, std::size_t observables,
                       const std::function<void(std::size_t chain, int sample, const SpinConfig&, std::vector<double>&)>& measure) {
  return parallel_map<std::vector<std::vector<double>>>(
      static_cast<std::size_t>(c.replicas), workers, [&](std::size_t r) {
        SpinChain chain(C, N, derive_seed(seed, r, 0xc4a1), opts);
        for (int s = 0; s < c.burn_in; ++s) chain.sweep();
        std::vector<std::vector<double>> series(observables);
        std::vector<double> row(observables);
        for (int k = 0; k < c.sweeps; ++k) {
          for (int t = 0; t < c.thin; ++t) chain.sweep();
          std::fill(row.begin(), row.end(), 0.0);
          measure(r, k, chain.state(), row);
          for (std::size_t j = 0; j < observables; ++j) series[j].push_back(row[j]);
        }
        return series;
      });
}

Estimate pooled(const ChainSeries& s, std::size_t obs) {
  if (s.size() == 1) return batch_means(s[0][obs]);
  std::vector<double> means;
  long long total = 0;
  for (const auto& chain : s) {
    means.push_back(mean_estimate(chain[obs]).mean);
    total += static_cast<long long>(chain[obs].size());
  }
  Estimate e = mean_estimate(means);
  e.samples = total;
  return e;
}

SpinChainOptions cluster_options(int overrelax) {
  SpinChainOptions o;
  o.algorithm = SpinAlgorithm::Wolff;
  o.heatbath_mix = 1;
  o.overrelax = overrelax;
  return o;
}

// ---------------------------------------------------------------------------

void exit_set_scan(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  const bool phiA = c.observable == "phiA";
  if (!c.observable.empty() && !phiA && c.observable != "reach")
    fail(ErrorKind::Config, "bad value '" + c.observable + "' for key 'observable'");
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    ExplorationParams p{c.n[i], c.N, c.R, c.k, c.epsilon, c.metric};
    json params = {{"n", p.n}, {"N", p.N}, {"R", p.R}, {"k", p.k}, {"epsilon", p.epsilon}, {"metric", to_string(p.metric)}};
    std::uint64_t s = derive_seed(*c.seed, i, 0x5ca);
    if (phiA) rec.add("phiA_norm2", params, phiA_variance(p, c.replicas, s, ctx.workers));
    else rec.add("reach_probability", params, reach_probability(p, c.replicas, s, ctx.workers));
  }
}

void connectivity_decay(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  int maxd = 0;
  for (int d : c.distances) maxd = std::max(maxd, d);
  require(2 * maxd < c.window, ErrorKind::Config, "key 'window' must exceed twice the largest distance");
  SpectralTorusSampler sampler(c.window, 0.0, true);
  std::vector<double> dist(c.distances.begin(), c.distances.end());
  DecayFit fit = decay_scan(dist, c.replicas, *c.seed, ctx.workers, [&](std::uint64_t s) {
    Rng rng = make_rng(s);
    VectorField f = sampler.sample(c.N, rng);
    return rooted_connectivity(f, c.distances, c.R, c.k, c.metric);
  });
  json base = {{"torus", c.window}, {"N", c.N}, {"R", c.R}, {"k", c.k}, {"metric", to_string(c.metric)}};
  for (const auto& row : fit.rows) {
    json p = base;
    p["r"] = row.distance;
    rec.add("connectivity", p, row.p, row.stderr_, c.replicas);
  }
  rec.add("decay_rate", base, fit.rate, fit.rate_se, c.replicas);
  rec.add("decay_rate_ci", base, fit.rate_ci, 0.0, c.replicas);
  rec.add("decay_r2", base, fit.r2, 0.0, c.replicas);
}

void isomorphism_suite(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  GraphPtr g = build_box(c.window);
  std::vector<char> zs = boundary_zeroset(*g);
  std::vector<int> interior = g->interior_sites();
  const std::size_t S = interior.size();
  FieldSampler fs(g, zs, 0.0);
  struct Rep {
    std::vector<double> L, P;
  };
  auto reps = parallel_map<Rep>(static_cast<std::size_t>(c.replicas), ctx.workers, [&](std::size_t r) {
    Rep out;
    LoopSoup soup = sample_soup(g, zs, c.N, 0.0, derive_seed(*c.seed, r, 1));
    LocalTimeField L = local_time(soup);
    Rng rng = make_rng(*c.seed, r, 2);
    VectorField f = fs.sample(c.N, rng);
    for (int s : interior) {
      out.L.push_back(L.total(s));
      out.P.push_back(f.norm2(s));
    }
    return out;
  });
  json base = {{"window", c.window}, {"N", c.N}};
  double ks_max = 0;
  std::vector<double> a(reps.size()), b(reps.size());
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t r = 0; r < reps.size(); ++r) {
      a[r] = reps[r].L[s];
      b[r] = reps[r].P[s];
    }
    ks_max = std::max(ks_max, ks_statistic(a, b));
  }
  rec.add("ks_max", base, ks_max, 0.0, c.replicas);
  double zmax = 0;
  for (std::size_t x = 0; x < S; ++x)
    for (std::size_t y = x; y < S; ++y) {
      Accumulator al, ap;
      for (const auto& rp : reps) {
        al.add(rp.L[x] * rp.L[y]);
        ap.add(rp.P[x] * rp.P[y]);
      }
      double se = std::hypot(al.stderr_of_mean(), ap.stderr_of_mean());
      if (se > 0) zmax = std::max(zmax, std::abs(al.mean() - ap.mean()) / se);
    }
  rec.add("second_moment_max_z", base, zmax, 0.0, c.replicas);
  int center = g->index({0, 0});
  Accumulator lc;
  for (std::size_t s = 0; s < S; ++s)
    if (interior[s] == center)
      for (const auto& rp : reps) lc.add(rp.L[s]);
  rec.add("center_local_time", base, lc.estimate());
  rec.add("center_green_times_N", base, c.N * green(g, zs, 0.0)(center, center), 0.0, 0);
}

std::vector<std::pair<int, Site>> axis_pairs(const std::vector<int>& distances) {
  std::vector<std::pair<int, Site>> out;
  for (int d : distances)
    for (Site s : {Site{d, 0}, Site{0, d}, Site{-d, 0}, Site{0, -d}}) out.push_back({d, s});
  return out;
}

void corr_sandwich(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  GraphPtr g = build_window(c.window);
  const int o = g->index({0, 0});
  auto pairs = axis_pairs(c.distances);
  std::vector<int> target;
  for (auto& [d, s] : pairs) {
    int t = g->index(s);
    require(t >= 0, ErrorKind::Config, "key 'distances' exceeds the window");
    target.push_back(t);
  }
  for (std::size_t bi = 0; bi < c.beta.size(); ++bi) {
    const double beta = c.beta[bi];
    const std::uint64_t seed = derive_seed(*c.seed, bi, 0x5a);
    const std::size_t P = pairs.size();
    auto series = run_chains(uniform_conductances(g, beta), c.N, cluster_options(1), c, seed, ctx.workers, 3 * P,
                             [&](std::size_t chain, int k, const SpinConfig& s, std::vector<double>& row) {
                               EdgeRefinement r = cable_on_extension(
                                   s, beta, derive_seed(seed, chain * 1000003ull + static_cast<std::uint64_t>(k), 0xcb));
                               SignClusters cl(r);
                               for (std::size_t j = 0; j < P; ++j) {
                                 bool conn = cl.connected(o, target[j]);
                                 row[j] = s.dot(o, target[j]);
                                 row[P + j] = conn;
                                 row[2 * P + j] = conn ? c.N / beta * r.values[o] * r.values[target[j]] : 0.0;
                               }
                             });
    for (std::size_t j = 0; j < P; ++j) {
      json p = {{"window", c.window}, {"N", c.N}, {"beta", beta}, {"x", {0, 0}},
                {"y", {pairs[j].second.x, pairs[j].second.y}}, {"distance", pairs[j].first}};
      rec.add("corr", p, pooled(series, j));
      rec.add("connectivity", p, pooled(series, P + j));
      rec.add("corr_via_cable", p, pooled(series, 2 * P + j));
    }
  }
}

void polyakov_limit(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  require(c.N >= 2, ErrorKind::Config, "key 'N' must be >= 2 for rooting");
  GraphPtr g = build_torus(c.window);
  TorusKernel kernel(c.window, 0.0);
  std::vector<int> sites;
  std::vector<double> target;
  for (int i = 0; i < g->size(); ++i) {
    auto d = g->displacement(0, i);
    double r = std::hypot(d[0], d[1]);
    if (r == 0 || r > 4) continue;
    sites.push_back(i);
    target.push_back(kernel.rooted(d[0], d[1], d[0], d[1]));
  }
  for (std::size_t bi = 0; bi < c.beta.size(); ++bi) {
    const double beta = c.beta[bi];
    const double sb = std::sqrt(beta);
    auto series = run_chains(uniform_conductances(g, beta), c.N, cluster_options(2), c, derive_seed(*c.seed, bi, 0x90),
                             ctx.workers, sites.size(),
                             [&](std::size_t, int, const SpinConfig& s, std::vector<double>& row) {
                               SpinConfig rooted = north_root(s, 0);
                               for (std::size_t j = 0; j < sites.size(); ++j) {
                                 // every lower component has the same law; average them
                                 double acc = 0;
                                 for (int comp = 0; comp + 1 < c.N; ++comp) {
                                   double v = sb * rooted.at(sites[j], comp);
                                   acc += v * v;
                                 }
                                 row[j] = acc / (c.N - 1);
                               }
                             });
    double max_rel = 0, mean_rel = 0;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      Estimate e = pooled(series, j);
      auto d = g->displacement(0, sites[j]);
      json p = {{"torus", c.window}, {"N", c.N}, {"beta", beta}, {"x", {d[0], d[1]}}, {"green", target[j]}};
      rec.add("rooted_variance", p, e);
      double rel = std::abs(e.mean - target[j]) / target[j];
      max_rel = std::max(max_rel, rel);
      mean_rel += rel / static_cast<double>(sites.size());
    }
    json p = {{"torus", c.window}, {"N", c.N}, {"beta", beta}};
    rec.add("max_relative_error", p, max_rel, 0.0, c.replicas);
    rec.add("mean_relative_error", p, mean_rel, 0.0, c.replicas);
  }
}

void chessboard_tail(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  GraphPtr g = build_torus(c.window);
  const double beta = c.beta.front();
  std::vector<int> all_edges(g->edge_count());
  std::iota(all_edges.begin(), all_edges.end(), 0);
  std::vector<GradientTwoPoint> probes;
  for (int d : c.distances) probes.emplace_back(g, d);
  const std::size_t nK = c.K.size();
  auto series = run_chains(uniform_conductances(g, beta), c.N, cluster_options(1), c, derive_seed(*c.seed, 0, 0xcb0),
                           ctx.workers, nK + probes.size(),
                           [&](std::size_t, int, const SpinConfig& s, std::vector<double>& row) {
                             GradientTail tail(all_edges, beta, c.K);
                             tail.add(s);
                             auto t = tail.tails();
                             for (std::size_t j = 0; j < nK; ++j) row[j] = t[j].mean;
                             for (std::size_t j = 0; j < probes.size(); ++j) {
                               GradientTwoPoint p = probes[j];
                               p.add(s);
                               row[nK + j] = p.estimate().mean;
                             }
                           });
  json base = {{"torus", c.window}, {"N", c.N}, {"beta", beta}};
  for (std::size_t j = 0; j < nK; ++j) {
    json p = base;
    p["K"] = c.K[j];
    p["bound"] = std::exp(-0.5 * c.K[j] * c.K[j]);
    rec.add("gradient_tail", p, pooled(series, j));
  }
  for (std::size_t j = 0; j < probes.size(); ++j) {
    json p = base;
    p["gap"] = c.distances[j];
    rec.add("gradient_two_point", p, pooled(series, nK + j));
  }
}

void gm_suite(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  const double beta = c.beta.front(), m = c.m.front();
  json base = {{"torus", c.window}, {"beta", beta}, {"m", m}, {"N", c.N}};
  SpectralTorusSampler sampler(c.window, m, false);
  ChainSchedule sched{c.burn_in, c.sweeps, c.thin};
  struct Rep {
    double density = 0;
    std::vector<int> comp_sizes;
    bool spans = false;
    std::vector<Estimate> xy;
  };
  auto reps = parallel_map<Rep>(static_cast<std::size_t>(c.replicas), ctx.workers, [&](std::size_t r) {
    Rng rng = make_rng(*c.seed, r, 0x6a);
    VectorField f = torus_to_window(sampler.sample(c.N, rng));
    GmGraph G = build_Gm(f, beta);
    Rep out;
    out.density = G.density();
    ClusterLabeling cl = clusters(G.window, [&] {
      std::vector<char> comp(G.mask.size());
      for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = !G.mask[i];
      return comp;
    }(), c.k);
    out.comp_sizes = cl.size;
    out.spans = bernoulli_on_Gm(G, c.p, derive_seed(*c.seed, r, 0x6b)).spans;
    out.xy = xy_two_point_on_Gm(G, c.distances, sched, derive_seed(*c.seed, r, 0x6c));
    return out;
  });
  Accumulator dens;
  std::vector<int> sizes;
  int spans = 0;
  for (const auto& rp : reps) {
    dens.add(rp.density);
    sizes.insert(sizes.end(), rp.comp_sizes.begin(), rp.comp_sizes.end());
    spans += rp.spans;
  }
  rec.add("density", base, dens.estimate());
  TailFit tail = survival_fit(sizes);
  json kp = base;
  kp["k"] = c.k;
  rec.add("complement_tail_r2", kp, tail.fit.r2, 0.0, c.replicas);
  rec.add("complement_tail_rate", kp, tail.rate, tail.fit.slope_se, c.replicas);
  rec.add("complement_tail_rate_ci", kp, tail.rate_ci, 0.0, c.replicas);
  json pp = base;
  pp["p"] = c.p;
  rec.add("bernoulli_span_fraction", pp, binomial_estimate(spans, c.replicas));

  std::vector<DecayRow> rows;
  for (std::size_t d = 0; d < c.distances.size(); ++d) {
    Accumulator a;
    for (const auto& rp : reps)
      if (rp.xy[d].samples > 0) a.add(rp.xy[d].mean);
    json p = base;
    p["r"] = c.distances[d];
    rec.add("xy_two_point", p, a.estimate());
    rows.push_back({static_cast<double>(c.distances[d]), std::clamp(a.mean(), 0.0, 1.0), a.stderr_of_mean()});
  }
  double rate = 0, ci = std::numeric_limits<double>::infinity(), r2 = 0, se = 0;
  int kept = 0;
  for (const auto& r : rows) kept += r.p > 0;
  if (kept >= 2) {
    DecayFit fit = fit_decay(rows);
    rate = fit.rate;
    ci = fit.rate_ci;
    r2 = fit.r2;
    se = fit.rate_se;
  }
  rec.add("xy_decay_rate", base, rate, se, c.replicas);
  rec.add("xy_decay_rate_ci", base, ci, 0.0, c.replicas);
  rec.add("xy_decay_r2", base, r2, 0.0, c.replicas);

  for (std::size_t i = 0; i < c.n.size(); ++i) {
    const int L = c.n[i];
    SpectralTorusSampler s2(L, m, false);
    auto giants = parallel_map<double>(static_cast<std::size_t>(c.replicas), ctx.workers, [&](std::size_t r) {
      Rng rng = make_rng(*c.seed, r, 0x6d00 + i);
      GmGraph G = build_Gm(torus_to_window(s2.sample(c.N, rng)), beta);
      return fk_ising(G.window, G.mask, c.beta_ising, sched, derive_seed(*c.seed, r, 0x6e00 + i)).giant.mean;
    });
    json p = base;
    p["size"] = L;
    p["beta_ising"] = c.beta_ising;
    rec.add("fk_giant", p, mean_estimate(giants));
  }
  json dp = {{"beta_ising", c.beta_ising}};
  rec.add("domination_p", dp, fk_domination_p(c.beta_ising), 0.0, 0);
  rec.add("domination_p", json{{"beta_ising", "log(3)/2"}}, fk_domination_p(0.5 * std::log(3.0)), 0.0, 0);
}

void equator_diagnostic(const ExperimentConfig& c, const RunContext& ctx, Recorder& rec) {
  require(c.N >= 1, ErrorKind::Config, "key 'N' must be positive");
  const double beta = c.beta.front();
  for (std::size_t i = 0; i < c.n.size(); ++i) {
    const int L = c.n[i];
    GraphPtr g = build_torus(L);
    const std::uint64_t seed = derive_seed(*c.seed, i, 0xe0);
    std::vector<int> xs, ys;
    for (int a = 1; a < L / 2; ++a) {
      xs.push_back(g->index({a, 0}));
      ys.push_back(g->index({0, a}));
    }
    auto series = run_chains(uniform_conductances(g, beta), c.N, cluster_options(1), c, seed, ctx.workers, 3,
                             [&](std::size_t chain, int k, const SpinConfig& s, std::vector<double>& row) {
                               EdgeRefinement r = cable_on_extension(
                                   s, beta, derive_seed(seed, chain * 1000003ull + static_cast<std::uint64_t>(k), 0xe1),
                                   c.N - 1);
                               SignClusters cl(r);
                               double sum = 0;
                               for (int x : xs)
                                 for (int y : ys) sum += cl.connected(x, y);
                               EquatorDual d(r);
                               row[0] = sum;
                               row[1] = static_cast<double>(d.equator_size()) / g->edge_count();
                               row[2] = static_cast<double>(d.largest_inner_cluster()) / d.face_count();
                             });
    json p = {{"torus", L}, {"N", c.N}, {"beta", beta}};
    rec.add("connectivity_sum", p, pooled(series, 0));
    rec.add("equator_fraction", p, pooled(series, 1));
    rec.add("equator_largest_cluster_fraction", p, pooled(series, 2));
  }
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& c, const RunContext& ctx) {
  validate(c);
  require(ctx.workers >= 1, ErrorKind::Config, "workers must be >= 1");
  Recorder rec(c);
  const std::string& e = c.experiment;
  if (e == "exit-set-scan") exit_set_scan(c, ctx, rec);
  else if (e == "connectivity-decay") connectivity_decay(c, ctx, rec);
  else if (e == "isomorphism-suite") isomorphism_suite(c, ctx, rec);
  else if (e == "corr-sandwich") corr_sandwich(c, ctx, rec);
  else if (e == "polyakov-limit") polyakov_limit(c, ctx, rec);
  else if (e == "chessboard-tail") chessboard_tail(c, ctx, rec);
  else if (e == "gm-suite") gm_suite(c, ctx, rec);
  else if (e == "equator-diagnostic") equator_diagnostic(c, ctx, rec);
  else fail(ErrorKind::Config, "unknown experiment '" + e + "'");
  return rec.finish();
}

std::string to_json_line(const ResultRecord& r) {
  json j = {{"experiment", r.experiment}, {"params", r.params},   {"observable", r.observable},
            {"estimate", r.estimate},     {"stderr", r.stderr_},  {"replicas", r.replicas},
            {"seed", r.seed},             {"version", r.version}, {"wall_time", r.wall_time}};
  return j.dump();
}

ResultRecord parse_record(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& ex) {
    fail(ErrorKind::Io, std::string("malformed record: ") + ex.what());
  }
  ResultRecord r;
  try {
    r.experiment = j.at("experiment").get<std::string>();
    r.params = j.at("params");
    r.observable = j.at("observable").get<std::string>();
    r.estimate = j.at("estimate").is_null() ? std::nan("") : j.at("estimate").get<double>();
    r.stderr_ = j.at("stderr").is_null() ? std::nan("") : j.at("stderr").get<double>();
    r.replicas = j.at("replicas").get<long long>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.wall_time = j.at("wall_time").get<double>();
  } catch (const json::exception& ex) {
    fail(ErrorKind::Io, std::string("malformed record: ") + ex.what());
  }
  return r;
}

std::vector<ResultRecord> read_records(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open records '" + path + "'");
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) out.push_back(parse_record(line));
  return out;
}

void persist(const std::vector<ResultRecord>& records, const ExperimentConfig& c, const RunContext& ctx) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  require(!ec && fs::is_directory(c.out), ErrorKind::Io, "cannot create output directory '" + c.out + "'");
  {
    std::ofstream os(fs::path(c.out) / "records.jsonl", std::ios::app);
    require(static_cast<bool>(os), ErrorKind::Io, "output directory '" + c.out + "' is not writable");
    for (const auto& r : records) os << to_json_line(r) << '\n';
    require(static_cast<bool>(os), ErrorKind::Io, "failed writing records");
  }
  std::ofstream os(fs::path(c.out) / "runs.jsonl", std::ios::app);
  require(static_cast<bool>(os), ErrorKind::Io, "output directory '" + c.out + "' is not writable");
  json cfg = json::object();
  for (const auto& [k, v] : c.given) cfg[k] = v;
  cfg["seed"] = std::to_string(*c.seed);
  json run = {{"experiment", c.experiment}, {"seed", *c.seed},
              {"workers", ctx.workers},     {"workers_source", ctx.workers_source},
              {"version", version_string()}, {"records", records.size()},
              {"config", cfg}};
  os << run.dump() << '\n';
}

bool same_results(const std::vector<ResultRecord>& a, const std::vector<ResultRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto &x = a[i], &y = b[i];
    auto same = [](double u, double v) { return std::memcmp(&u, &v, sizeof u) == 0; };
    if (x.experiment != y.experiment || x.params != y.params || x.observable != y.observable ||
        !same(x.estimate, y.estimate) || !same(x.stderr_, y.stderr_) || x.replicas != y.replicas || x.seed != y.seed ||
        x.version != y.version)
      return false;
  }
  return true;
}

}  // namespace gfflab
