#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gfflab/random.hpp"
#include "gfflab/error.hpp"
#include "gfflab/gff.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/stats.hpp"
#include "oracles/dense_green.hpp"

using namespace gfflab;

namespace {
double normal_cdf(double x, double var) { return 0.5 * std::erfc(-x / std::sqrt(2 * var)); }
}  // namespace

TEST_CASE("single interior site has variance 1/4 per component") {
  auto g = build_box(1);
  FieldSampler s(g, boundary_zeroset(*g), 0.0);
  Rng rng = make_rng(5);
  int o = g->index({0, 0});
  Accumulator a0, a1, cross;
  for (int t = 0; t < 100000; ++t) {
    auto f = s.sample(2, rng);
    a0.add(f.at(o, 0) * f.at(o, 0));
    a1.add(f.at(o, 1) * f.at(o, 1));
    cross.add(f.at(o, 0) * f.at(o, 1));
    if (t < 10)
      for (int b : g->boundary_sites()) CHECK(f.norm2(b) == 0.0);
  }
  CHECK(std::abs(a0.mean() - 0.25) < 5 * a0.stderr_of_mean());
  CHECK(std::abs(a1.mean() - 0.25) < 5 * a1.stderr_of_mean());
  CHECK(std::abs(cross.mean()) < 5 * cross.stderr_of_mean());
}

TEST_CASE("sample covariance matches the dense Green's function") {
  const int n = 8;
  std::vector<oracle::Point> pts;
  auto D = oracle::dense_box_green(n, 0.0, &pts);
  auto g = build_box(n);
  FieldSampler s(g, boundary_zeroset(*g), 0.0);
  Rng rng = make_rng(17);
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> dense_pairs;
  for (auto [a, b] : {std::pair<oracle::Point, oracle::Point>{{0, 0}, {0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {3, 2}},
                      {{-5, 5}, {-5, 6}}, {{7, 7}, {7, 7}}, {{2, -4}, {-3, 1}}, {{6, 0}, {-6, 0}}}) {
    pairs.push_back({g->index({a.x, a.y}), g->index({b.x, b.y})});
    int da = -1, db = -1;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].x == a.x && pts[i].y == a.y) da = static_cast<int>(i);
      if (pts[i].x == b.x && pts[i].y == b.y) db = static_cast<int>(i);
    }
    dense_pairs.push_back({da, db});
  }
  std::vector<Accumulator> acc(pairs.size());
  Accumulator crossc;
  for (int t = 0; t < 100000; ++t) {
    auto f = s.sample(2, rng);
    for (size_t p = 0; p < pairs.size(); ++p) acc[p].add(f.at(pairs[p].first, 0) * f.at(pairs[p].second, 0));
    crossc.add(f.at(pairs[0].first, 0) * f.at(pairs[2].second, 1));
  }
  for (size_t p = 0; p < pairs.size(); ++p) {
    double target = D(dense_pairs[p].first, dense_pairs[p].second);
    CHECK(std::abs(acc[p].mean() - target) < 5 * acc[p].stderr_of_mean() + 1e-12);
  }
  CHECK(std::abs(crossc.mean()) < 5 * crossc.stderr_of_mean());
}

TEST_CASE("massive and pinned samplers") {
  auto t = build_torus(8);
  auto f = sample_gff(t, 3, 0.5, std::vector<char>(t->size(), 0), 9);
  CHECK(f.N == 3);
  CHECK_THROWS_AS(sample_gff(t, 1, 0.0, std::vector<char>(t->size(), 0), 1), Error);
  auto b = build_box(4);
  auto z = boundary_zeroset(*b);
  z[b->index({1, 1})] = 1;
  auto h = sample_gff(b, 2, 0.0, z, 3);
  CHECK(h.norm2(b->index({1, 1})) == 0.0);
  CHECK(sample_gff(b, 2, 0.0, z, 3).values == h.values);
}

TEST_CASE("rooted plane field") {
  auto f = sample_rooted_plane(32, 2, 4);
  CHECK(f.norm2(f.domain->index({0, 0})) == 0.0);

  // sampled variance against the exact rooted torus kernel
  SpectralTorusSampler s(32, 0.0, true);
  TorusKernel k(32, 0.0);
  Rng rng = make_rng(8);
  std::vector<Accumulator> acc(3);
  const int sites[3][2] = {{1, 0}, {4, 3}, {16, 16}};
  for (int r = 0; r < 4000; ++r) {
    auto v = s.sample(2, rng);
    for (int i = 0; i < 3; ++i) {
      int idx = v.domain->index({sites[i][0], sites[i][1]});
      acc[i].add(v.at(idx, 0) * v.at(idx, 0));
      acc[i].add(v.at(idx, 1) * v.at(idx, 1));
    }
  }
  for (int i = 0; i < 3; ++i) {
    double target = k.rooted(sites[i][0], sites[i][1], sites[i][0], sites[i][1]);
    // two correlated components per draw: inflate the error by sqrt 2
    CHECK(std::abs(acc[i].mean() - target) < 5 * std::sqrt(2.0) * acc[i].stderr_of_mean());
  }
}

TEST_CASE("rooted variance is stable under doubling the window") {
  const int n = 128;
  TorusKernel a(n, 0.0), b(2 * n, 0.0);
  for (int x = 1; x <= n / 8; x *= 2) {
    double va = a.rooted(x, 0, x, 0), vb = b.rooted(x, 0, x, 0);
    CHECK(std::abs(va - vb) / vb < 0.02);
    double da = a.rooted(x, x / 2, x, x / 2), db = b.rooted(x, x / 2, x, x / 2);
    CHECK(std::abs(da - db) / db < 0.02);
  }
}

TEST_CASE("field snapshots round trip bit exactly") {
  for (auto g : {GraphPtr(build_box(5)), GraphPtr(build_torus(7)->with_boundary({0}))}) {
    VectorField f = sample_gff(g, 3, 0.0, g->boundary_mask(), 12);
    std::stringstream ss;
    save_field(f, ss);
    auto h = load_field(ss);
    CHECK(h.N == 3);
    CHECK(h.seed == 12);
    CHECK(h.domain->size() == g->size());
    CHECK(h.values == f.values);
    CHECK(h.zeroset == f.zeroset);
  }
  std::stringstream bad("not a field\n");
  CHECK_THROWS_AS(load_field(bad), Error);
}

TEST_CASE("unconstrained Gibbs chain matches the Gaussian marginal") {
  auto g = build_box(2);
  auto spec = boundary_pinned_bands(g);
  int o = g->index({0, 0});
  GreenFn G(g, boundary_zeroset(*g), 0.0);
  double var = G(o, o);
  std::vector<double> xs;
  sample_conditioned(spec, {200, 10000, 10}, 21,
                     [&](const VectorField& f) { xs.push_back(f.at(o, 0)); });
  double ks = ks_statistic_cdf(xs, [var](double x) { return normal_cdf(x, var); });
  CHECK(ks < 0.02);
}

TEST_CASE("degenerate and invalid bands") {
  auto g = build_box(2);
  BandSpec zero{g, std::vector<Band>(g->size(), Band::pin_at(0.0))};
  int calls = 0;
  sample_conditioned(zero, {5, 5, 1}, 1, [&](const VectorField& f) {
    ++calls;
    for (double v : f.values) CHECK(v == 0.0);
  });
  CHECK(calls == 5);

  BandSpec none{g, std::vector<Band>(g->size(), Band::whole())};
  CHECK_THROWS_AS(ConditionedGibbs(none, 1), Error);
  auto empty = boundary_pinned_bands(g);
  empty.bands[g->index({0, 0})] = Band::interval(1.0, -1.0);
  CHECK_THROWS_AS(ConditionedGibbs(empty, 1), Error);
  empty.bands[g->index({0, 0})].intervals.clear();
  CHECK_THROWS_AS(ConditionedGibbs(empty, 1), Error);
}

TEST_CASE("truncated normal draws stay in their band with the right law") {
  Rng rng = make_rng(3);
  std::vector<Interval> parts{{-1.0, -0.5}, {2.0, 2.5}};
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i) {
    double x = truncated_normal(0.3, 1.0, parts, rng);
    CHECK(((x >= -1 && x <= -0.5) || (x >= 2 && x <= 2.5)));
    xs.push_back(x);
  }
  auto Phi = [](double x) { return normal_cdf(x - 0.3, 1.0); };
  double m1 = Phi(-0.5) - Phi(-1), m2 = Phi(2.5) - Phi(2);
  auto cdf = [&](double x) {
    double c = 0;
    if (x >= -1) c += Phi(std::min(x, -0.5)) - Phi(-1);
    if (x >= 2) c += Phi(std::min(x, 2.5)) - Phi(2);
    return c / (m1 + m2);
  };
  CHECK(ks_statistic_cdf(xs, cdf) < 0.015);
  // far tail stays finite
  double far = truncated_normal(0.0, 1.0, {{40.0, 41.0}}, rng);
  CHECK(far >= 40.0);
  CHECK(far <= 41.0);
}

TEST_CASE("banded field satisfies FKG for increasing coordinates") {
  auto g = build_box(2);
  auto spec = boundary_pinned_bands(g);
  for (int i = 0; i < g->size(); ++i)
    if (!g->is_boundary(i)) spec.bands[i] = Band::interval(-1, 1);
  int v1 = g->index({0, 0}), v2 = g->index({1, -1});
  std::vector<double> f, h, fh;
  sample_conditioned(spec, {100, 20000, 2}, 33, [&](const VectorField& s) {
    f.push_back(s.at(v1, 0));
    h.push_back(s.at(v2, 0));
    fh.push_back(s.at(v1, 0) * s.at(v2, 0));
  });
  double mf = mean_estimate(f).mean, mh = mean_estimate(h).mean;
  std::vector<double> centred;
  for (size_t i = 0; i < f.size(); ++i) centred.push_back((f[i] - mf) * (h[i] - mh));
  auto cov = batch_means(centred);
  CHECK(cov.mean >= -3 * cov.stderr_);
}

TEST_CASE("fluctuation probe bounds") {
  auto g = build_box(8);
  FluctuationProbe p;
  p.graph = g;
  p.N = 2;
  p.level = 1;
  p.site = g->index({0, 0});
  p.p = 1;
  p.below.assign(g->size(), 0);
  for (int i = 0; i < g->size(); ++i) p.below[i] = !g->is_boundary(i);
  auto e = fluctuation_tail_probe(p, {100, 500, 1}, 4);
  CHECK(e.mean <= 2.0);
  CHECK(e.mean <= 1.0);

  FluctuationProbe bad = p;
  bad.above.assign(g->size(), 0);
  bad.above[g->boundary_sites()[0]] = 1;
  bad.below[g->boundary_sites()[0]] = 0;
  CHECK_THROWS_AS(fluctuation_tail_probe(bad, {1, 1, 1}, 1), Error);
}

TEST_CASE("fluctuation probe growth follows the polylog shape") {
  auto g = build_box(16);
  int v = g->index({0, 0});
  auto estimate_at = [&](int rho) {
    FluctuationProbe p;
    p.graph = g;
    p.N = 2;
    p.level = 1;
    p.site = v;
    p.p = 1;
    p.below.assign(g->size(), 0);
    for (int i = 0; i < g->size(); ++i) {
      Site s = g->site(i);
      p.below[i] = !g->is_boundary(i) && std::max(std::abs(s.x), std::abs(s.y)) > rho;
    }
    return fluctuation_tail_probe(p, {200, 3000, 1}, 10 + rho);
  };
  auto e2 = estimate_at(2), e8 = estimate_at(8);
  auto shape = [](double rho) { return std::pow(1 + std::log(rho + 2), 2); };
  CHECK(e8.mean > e2.mean);
  CHECK(e8.mean / e2.mean <= 2 * shape(8) / shape(2));
}
