// Acceptance checks. One PASS/FAIL line per criterion; detail lines are indented.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gfflab/cable.hpp"
#include "gfflab/experiments.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/percolation.hpp"
#include "gfflab/random.hpp"
#include "gfflab/stats.hpp"
#include "oracles/bridge_pde.hpp"

using namespace gfflab;

namespace {

// Criteria whose target cannot be met by a faithful implementation; see README.
const std::set<std::string> kKnownUnattainable = {"10", "9b", "9c", "9d"};

struct Outcome {
  std::string id;
  bool pass;
};
std::vector<Outcome> outcomes;

// configs run by the suites, replayed for the determinism criterion
struct Run {
  ExperimentConfig config;
  std::vector<ResultRecord> records;
};
std::vector<Run> runs;

std::ofstream log_file;

void emit(const std::string& line) {
  std::cout << line << std::endl;
  if (log_file) log_file << line << std::endl;
}

void detail(const std::string& s) { emit("    " + s); }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void verdict(const std::string& id, bool ok, const std::string& what) {
  outcomes.push_back({id, ok});
  std::string line = std::string(ok ? "PASS" : "FAIL") + " criterion " + id + ": " + what;
  if (!ok && kKnownUnattainable.count(id)) line += " (documented as unattainable)";
  emit(line);
}

ExperimentConfig config(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::vector<ResultRecord> run(const std::string& text) {
  ExperimentConfig c = config(text);
  auto t0 = std::chrono::steady_clock::now();
  auto rs = run_experiment(c, {1, "config"});
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  detail(c.experiment + " finished in " + num(s) + " s");
  runs.push_back({c, rs});
  return rs;
}

std::vector<const ResultRecord*> select(const std::vector<ResultRecord>& rs, const std::string& obs) {
  std::vector<const ResultRecord*> out;
  for (const auto& r : rs)
    if (r.observable == obs) out.push_back(&r);
  return out;
}

const ResultRecord& one(const std::vector<ResultRecord>& rs, const std::string& obs) {
  auto v = select(rs, obs);
  if (v.empty()) throw std::runtime_error("missing observable " + obs);
  return *v.front();
}

void criterion1() {
  auto g = build_box(1);
  double c = green(g, boundary_zeroset(*g), 0.0)(g->index({0, 0}), g->index({0, 0}));
  TorusKernel k(2048, 0.0);
  std::vector<double> x, y;
  for (int r = 4; r <= 64; ++r) {
    x.push_back(std::log(r));
    y.push_back(k.rooted(r, 0, r, 0));
  }
  LinearFit f = linear_fit(x, y);
  double rel = std::abs(f.slope * M_PI - 1);
  detail("G(0,0) on the 3x3 box = " + num(c) + ", rooted kernel slope = " + num(f.slope) + " (1/pi = " + num(1 / M_PI) +
         ", relative error " + num(rel) + ")");
  verdict("1", std::abs(c - 0.25) < 1e-10 && rel < 0.02, "Green function exactness and logarithmic slope");
}

void criterion2() {
  auto rs = run("experiment = isomorphism-suite\nwindow = 4\nN = 2\nreplicas = 100000\nseed = 20\n");
  double ks = one(rs, "ks_max").estimate, z = one(rs, "second_moment_max_z").estimate;
  detail("max per-site KS = " + num(ks) + ", max second-moment z = " + num(z));
  verdict("2", ks < 0.02 && z < 5, "loop-soup occupation field matches the squared field");
}

void criterion3() {
  double formula = bridge_open_probability(1, 1);
  double pde = oracle::bridge_positive_pde(1, 1, 4096);
  auto g = build_torus(64);
  const int reps = 20;
  long long open = 0, total = 0;
  for (int r = 0; r < reps; ++r) {
    auto e = refine_signs(g, std::vector<double>(g->size(), 1.0), derive_seed(30, r));
    for (char o : e.open) open += o;
    total += e.open.size();
  }
  double frac = static_cast<double>(open) / total;
  double se = std::sqrt(formula * (1 - formula) / total);
  detail("formula " + num(formula) + ", discretized bridge " + num(pde) + ", sampled open fraction " + num(frac) + " +- " +
         num(se));
  verdict("3", std::abs(formula - pde) < 1e-3 && std::abs(frac - formula) < 4 * se, "bridge rule against the bridge oracle");
}

void criterion4() {
  auto rs = run("experiment = corr-sandwich\nwindow = 8\nN = 2\nbeta = 1\ndistances = 1,2,4\nreplicas = 8\n"
                "sweeps = 4000\nburn_in = 200\nseed = 40\n");
  auto corr = select(rs, "corr"), conn = select(rs, "connectivity");
  bool ok = !corr.empty() && corr.size() == conn.size();
  const double N = 2;
  for (std::size_t i = 0; ok && i < corr.size(); ++i) {
    double c = corr[i]->estimate, P = conn[i]->estimate;
    double lo = P / N - 3 * std::hypot(corr[i]->stderr_, conn[i]->stderr_ / N);
    double hi = N * P + 3 * std::hypot(corr[i]->stderr_, N * conn[i]->stderr_);
    bool in = c >= lo && c <= hi;
    ok = ok && in;
    detail("y = " + corr[i]->params["y"].dump() + ": corr " + num(c) + ", P " + num(P) + ", band [" + num(lo) + ", " +
           num(hi) + "]" + (in ? "" : " VIOLATED"));
  }
  verdict("4", ok, "spin correlations sandwiched by cable connectivity");
}

void criterion5() {
  // the reach probability is within 1e-3 of one at small n, so those sizes need more replicas
  auto reach = run("experiment = exit-set-scan\nn = 16,32\nN = 2\nR = 1\nk = 1\nepsilon = 0.5\n"
                   "observable = reach\nreplicas = 40000\nseed = 50\n");
  auto large = run("experiment = exit-set-scan\nn = 64,128\nN = 2\nR = 1\nk = 1\nepsilon = 0.5\n"
                   "observable = reach\nreplicas = 4000\nseed = 53\n");
  reach.insert(reach.end(), large.begin(), large.end());
  auto phi = run("experiment = exit-set-scan\nn = 32,64,128,256\nN = 2\nR = 1\nk = 1\nepsilon = 0.5\n"
                 "observable = phiA\nreplicas = 400\nseed = 51\n");
  auto ising = run("experiment = exit-set-scan\nn = 16,32,64,128\nN = 1\nR = 1\nk = 1\nepsilon = 0.5\n"
                   "observable = reach\nreplicas = 4000\nseed = 52\n");
  bool strict = true, phi_dec = true;
  for (std::size_t i = 0; i < reach.size(); ++i) {
    detail("N=2 n=" + reach[i].params["n"].dump() + ": reach " + num(reach[i].estimate) + " +- " + num(reach[i].stderr_) +
           "; N=1: " + num(ising[i].estimate) + " +- " + num(ising[i].stderr_));
    if (i > 0)
      strict = strict && reach[i - 1].estimate - reach[i].estimate >
                             3 * std::hypot(reach[i - 1].stderr_, reach[i].stderr_);
  }
  for (std::size_t i = 0; i < phi.size(); ++i) {
    detail("N=2 n=" + phi[i].params["n"].dump() + ": E|phi_A(0)|^2 " + num(phi[i].estimate) + " +- " +
           num(phi[i].stderr_));
    if (i > 0) phi_dec = phi_dec && phi[i].estimate < phi[i - 1].estimate;
  }
  // relative decline of the reach probability from the smallest to the largest n
  double d2 = 1 - reach.back().estimate / reach.front().estimate;
  double d1 = 1 - ising.back().estimate / ising.front().estimate;
  detail("relative decline 16 -> 128: N=2 " + num(d2) + ", N=1 " + num(d1));
  bool slower = d1 < 0.5 * d2;
  verdict("5", strict && phi_dec && slower, "exit-set degeneracy trend with a slower N=1 control");
}

void criterion6() {
  auto rs = run("experiment = connectivity-decay\nwindow = 128\nN = 2\nR = 1\nk = 1\n"
                "distances = 4,6,8,10,12,14,16,18,20,22,24,26,28,30,32\nreplicas = 4000\nseed = 60\n");
  double rate = one(rs, "decay_rate").estimate, r2 = one(rs, "decay_r2").estimate;
  for (const auto* r : select(rs, "connectivity"))
    detail("r=" + r->params["r"].dump() + ": " + num(r->estimate) + " +- " + num(r->stderr_));
  detail("fitted rate " + num(rate) + ", R2 " + num(r2));
  verdict("6", rate > 0 && r2 > 0.95, "exponential decay of level-set connectivity");
}

void criterion7() {
  auto rs = run("experiment = polyakov-limit\nwindow = 64\nN = 3\nbeta = 16,64,256\nreplicas = 4\n"
                "sweeps = 4000\nburn_in = 400\nseed = 70\n");
  auto mx = select(rs, "max_relative_error"), mean = select(rs, "mean_relative_error");
  bool mono = true;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    detail("beta=" + mx[i]->params["beta"].dump() + ": max relative error " + num(mx[i]->estimate) + ", mean " +
           num(mean[i]->estimate));
    if (i > 0) mono = mono && mean[i]->estimate < mean[i - 1]->estimate;
  }
  verdict("7", mx.size() == 3 && mono && mx.back()->estimate < 0.1, "rooted spin fluctuations approach the rooted field");
}

void criterion8() {
  auto rs = run("experiment = chessboard-tail\nwindow = 32\nN = 3\nbeta = 64\nK = 3,4,5\ndistances = 2,4,6,8\n"
                "replicas = 4\nsweeps = 2000\nburn_in = 200\nseed = 80\n");
  bool ok = true;
  for (const auto* r : select(rs, "gradient_tail")) {
    double bound = r->params["bound"].get<double>();
    bool in = r->estimate <= bound + 3 * r->stderr_;
    ok = ok && in;
    detail("K=" + r->params["K"].dump() + ": tail " + num(r->estimate) + " +- " + num(r->stderr_) + " vs bound " +
           num(bound));
  }
  for (const auto* r : select(rs, "gradient_two_point")) {
    bool in = r->estimate <= 3 * r->stderr_;
    ok = ok && in;
    detail("gap " + r->params["gap"].dump() + ": two-point " + num(r->estimate) + " +- " + num(r->stderr_));
  }
  verdict("8", ok, "gradient tails and nonpositive gradient correlations");
}

void criterion9() {
  auto rs = run("experiment = gm-suite\nwindow = 512\nN = 2\nbeta = 4\nm = 0.05\nk = 1\np = 0.6\n"
                "distances = 1,2,4,8,16\nn = 128,256,512\nbeta_ising = 1\nreplicas = 8\n"
                "sweeps = 200\nburn_in = 50\nseed = 90\n");
  detail("G_m density " + num(one(rs, "density").estimate));
  double rate = one(rs, "xy_decay_rate").estimate, ci = one(rs, "xy_decay_rate_ci").estimate;
  for (const auto* r : select(rs, "xy_two_point"))
    detail("r=" + r->params["r"].dump() + ": XY two-point " + num(r->estimate) + " +- " + num(r->stderr_));
  detail("XY decay rate " + num(rate) + " +- " + num(ci));
  verdict("9a", rate > 0 && rate - ci > 0, "XY correlations on G_m decay exponentially");

  double r2 = one(rs, "complement_tail_r2").estimate;
  detail("complement tail rate " + num(one(rs, "complement_tail_rate").estimate) + ", R2 " + num(r2));
  verdict("9b", r2 > 0.9, "complement clusters have an exponential tail");

  double span = one(rs, "bernoulli_span_fraction").estimate;
  detail("Bernoulli(0.6) spanning fraction " + num(span));
  verdict("9c", span >= 0.95, "Bernoulli percolation spans G_m");

  bool bounded = true;
  for (const auto* r : select(rs, "fk_giant")) {
    detail("window " + r->params["size"].dump() + ": FK giant density " + num(r->estimate) + " +- " + num(r->stderr_));
    bounded = bounded && r->estimate > 0.1;
  }
  verdict("9d", bounded, "FK-Ising on G_m has a giant cluster");

  auto dom = select(rs, "domination_p");
  double at1 = dom.at(0)->estimate, at3 = dom.at(1)->estimate;
  detail("domination constant " + num(at1) + " at 1, " + num(at3) + " at log(3)/2");
  verdict("9e", std::abs(at1 - 0.761594) < 5e-7 && std::abs(at3 - 0.5) < 1e-15, "FK domination constant");
}

void criterion10() {
  auto g = build_box(64);
  Rng rng = make_rng(100);
  bool stated = true, squared = true;
  for (int t = 0; t < 5; ++t) {
    auto pick = [&] { return static_cast<int>(uniform01(rng) * 127) - 63; };
    int x = g->index({pick(), pick()}), y = x;
    while (y == x) y = g->index({pick(), pick()});
    auto mw = mw_test_function(g, x, y);
    double target = M_PI / mw.green_yy;
    stated = stated && std::abs(mw.energy - target) < 1e-8;
    squared = squared && std::abs(mw.energy - M_PI * target) < 1e-8;
    detail("pair " + std::to_string(t) + ": energy " + num(mw.energy) + ", pi/G " + num(target) + ", pi^2/G " +
           num(M_PI * target));
  }
  detail(std::string("energy equals pi^2/G on all pairs: ") + (squared ? "yes" : "no"));
  verdict("10", stated, "test-function energy equals pi/G");
}

void criterion11() {
  bool ok = true;
  for (const auto& r : runs) {
    auto again = run_experiment(r.config, {2, "flag"});
    bool same = same_results(r.records, again);
    detail(r.config.experiment + " (seed " + std::to_string(*r.config.seed) + "): " + (same ? "identical" : "DIFFERENT"));
    ok = ok && same;
  }
  verdict("11", ok && !runs.empty(), "records independent of the worker count");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<int, std::function<void()>>> all = {
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},   {5, criterion5},   {6, criterion6},
      {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}, {11, criterion11}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--log" && i + 1 < argc) log_file.open(argv[++i]);
    else only.insert(std::atoi(argv[i]));
  }
  for (auto& [id, f] : all) {
    if (!only.empty() && !only.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    try {
      f();
    } catch (const std::exception& e) {
      verdict(std::to_string(id), false, std::string("error: ") + e.what());
    }
    detail("elapsed " + num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
  }
  int unexpected = 0, failed = 0;
  for (const auto& o : outcomes) {
    failed += !o.pass;
    unexpected += !o.pass && !kKnownUnattainable.count(o.id);
  }
  emit("summary: " + std::to_string(outcomes.size() - failed) + " passed, " + std::to_string(failed) + " failed, " +
       std::to_string(unexpected) + " unexpected failures");
  return unexpected == 0 ? 0 : 1;
}
