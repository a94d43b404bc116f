#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "doctest.h"
#include "gfflab/random.hpp"
#include "gfflab/error.hpp"
#include "gfflab/spin.hpp"
#include "oracles/two_spin.hpp"

using namespace gfflab;

namespace {

double z_score(const Estimate& a, const Estimate& b) {
  return std::abs(a.mean - b.mean) / std::hypot(a.stderr_, b.stderr_);
}

// Conductance c on the single edge (0,0)-(1,0) of a 3x3 window, 0 elsewhere.
ConductanceField single_edge(GraphPtr g, double c) {
  ConductanceField C = uniform_conductances(g, 0.0);
  C.C[g->edge_between(g->index({0, 0}), g->index({1, 0}))] = c;
  return C;
}

Estimate edge_correlation(GraphPtr g, const ConductanceField& C, int N, SpinAlgorithm alg, int samples,
                          std::uint64_t seed, int x, int y) {
  std::vector<double> xs;
  mcmc_spin(C, N, {200, samples, 1}, alg, seed, [&](const SpinConfig& s) { xs.push_back(s.dot(x, y)); });
  return batch_means(xs);
}

}  // namespace

TEST_CASE("von Mises-Fisher draws") {
  Rng rng = make_rng(1);
  for (int N : {2, 3, 4, 5}) {
    for (double kappa : {0.0, 0.7, 3.0, 40.0}) {
      std::vector<double> h(N, 0.0);
      h[N - 1] = kappa * 0.6;
      h[0] = kappa * 0.8;
      Accumulator acc;
      for (int i = 0; i < 20000; ++i) {
        auto v = sample_von_mises_fisher(h, rng);
        double n2 = 0, t = 0;
        for (int c = 0; c < N; ++c) {
          n2 += v[c] * v[c];
        }
        t = 0.8 * v[0] + 0.6 * v[N - 1];
        CHECK(std::abs(n2 - 1) < 1e-12);
        acc.add(t);
      }
      // E[mu.theta] = I_{N/2}(kappa) / I_{N/2-1}(kappa)
      double target = kappa == 0 ? 0.0
                                 : boost::math::cyl_bessel_i(0.5 * N, kappa) / boost::math::cyl_bessel_i(0.5 * N - 1, kappa);
      CHECK(std::abs(acc.mean() - target) < 4 * acc.stderr_of_mean() + 1e-12);
    }
  }
  Accumulator ising;
  for (int i = 0; i < 20000; ++i) ising.add(sample_von_mises_fisher({0.5}, rng)[0]);
  CHECK(std::abs(ising.mean() - std::tanh(0.5)) < 4 * ising.stderr_of_mean());
}

TEST_CASE("zero conductances give independent spins") {
  auto g = build_window(2);
  auto C = uniform_conductances(g, 0.0);
  int x = g->index({0, 0}), y = g->index({1, 0});
  for (auto alg : {SpinAlgorithm::Heatbath, SpinAlgorithm::Wolff}) {
    auto e = edge_correlation(g, C, 2, alg, 4000, 3, x, y);
    CHECK(std::abs(e.mean) < 3 * e.stderr_);
  }
}

TEST_CASE("single edge matches quadrature") {
  auto g = build_window(1);
  int x = g->index({0, 0}), y = g->index({1, 0});
  struct Case {
    int N;
    double c;
  };
  for (Case k : {Case{2, 1.0}, Case{3, 2.0}, Case{1, 0.6}}) {
    double target = oracle::two_spin_correlation(k.N, k.c);
    if (k.N == 2) CHECK(target == doctest::Approx(0.446389965).epsilon(1e-8));
    for (auto alg : {SpinAlgorithm::Heatbath, SpinAlgorithm::Wolff}) {
      auto e = edge_correlation(g, single_edge(g, k.c), k.N, alg, 40000, 7, x, y);
      INFO("N=", k.N, " alg=", int(alg), " mean=", e.mean, " se=", e.stderr_, " target=", target);
      CHECK(std::abs(e.mean - target) < 3 * e.stderr_);
    }
  }
}

TEST_CASE("heatbath and wolff agree on a small box") {
  auto g = build_window(4);
  auto C = uniform_conductances(g, 1.0);
  int x = g->index({0, 0}), y = g->index({2, 0});
  for (int N : {2, 3}) {
    auto a = edge_correlation(g, C, N, SpinAlgorithm::Heatbath, 20000, 11, x, y);
    std::vector<double> xs;
    SpinChainOptions o;
    o.algorithm = SpinAlgorithm::Wolff;
    SpinChain chain(C, N, 12, o);
    for (int s = 0; s < 200; ++s) chain.sweep();
    for (int s = 0; s < 20000; ++s) {
      chain.sweep();
      xs.push_back(chain.state().dot(x, y));
    }
    auto b = batch_means(xs);
    CHECK(z_score(a, b) < 3);
  }
}

TEST_CASE("angles of a field") {
  auto g = build_box(3);
  auto f = sample_gff(g, 2, 0.0, boundary_zeroset(*g), 5);
  auto [s, C] = angles_of_gff(f);
  for (int i = 0; i < g->size(); ++i) CHECK(std::abs(s.dot(i, i) - 1) < 1e-12);
  for (int e = 0; e < g->edge_count(); ++e) {
    const auto& E = g->edges()[e];
    CHECK(C.C[e] == doctest::Approx(std::sqrt(f.norm2(E.u) * f.norm2(E.v))));
  }
  VectorField bad = f;
  bad.at(g->index({0, 0}), 0) = 0;
  bad.at(g->index({0, 0}), 1) = 0;
  CHECK_THROWS_AS(angles_of_gff(bad), Error);
}

TEST_CASE("angles are an O(N) model in the norm conductances") {
  auto g = build_box(2);
  FieldSampler fs(g, boundary_zeroset(*g), 0.0);
  int x = g->index({0, 0}), y = g->index({1, 0});
  std::vector<double> direct, resampled;
  for (int r = 0; r < 3000; ++r) {
    Rng rng = make_rng(20, r);
    auto f = fs.sample(2, rng);
    auto [s, C] = angles_of_gff(f);
    direct.push_back(s.dot(x, y));
    SpinChainOptions o;
    o.active.assign(g->size(), 0);
    for (int i : g->interior_sites()) o.active[i] = 1;
    SpinChain chain(C, 2, derive_seed(21, r), o);
    for (int t = 0; t < 30; ++t) chain.sweep();
    resampled.push_back(chain.state().dot(x, y));
  }
  CHECK(z_score(mean_estimate(direct), mean_estimate(resampled)) < 3);
}

TEST_CASE("projection to N-1") {
  auto g = build_window(2);
  SpinConfig s{g, 3, std::vector<double>(g->size() * 3, 0.0)};
  Rng rng = make_rng(4);
  for (int i = 0; i < g->size(); ++i) {
    double a = 2 * M_PI * uniform01(rng);
    s.at(i, 0) = std::cos(a);
    s.at(i, 1) = std::sin(a);
  }
  auto [low, C] = project_down(s, 2.5);
  CHECK(low.N == 2);
  for (int i = 0; i < g->size(); ++i) {
    CHECK(low.at(i, 0) == doctest::Approx(s.at(i, 0)));
    CHECK(low.at(i, 1) == doctest::Approx(s.at(i, 1)));
  }
  for (double c : C.C) CHECK(c == doctest::Approx(2.5));

  SpinConfig t = s;
  for (int i = 0; i < g->size(); ++i) {
    auto v = sample_von_mises_fisher({0.0, 0.0, 0.0}, rng);
    for (int c = 0; c < 3; ++c) t.at(i, c) = v[c];
  }
  auto [low2, C2] = project_down(t, 1.0);
  for (int i = 0; i < g->size(); ++i) CHECK(std::abs(low2.dot(i, i) - 1) < 1e-12);
  for (int e = 0; e < g->edge_count(); ++e) {
    const auto& E = g->edges()[e];
    double w = std::sqrt(1 - t.at(E.u, 2) * t.at(E.u, 2)) * std::sqrt(1 - t.at(E.v, 2) * t.at(E.v, 2));
    CHECK(C2.C[e] == doctest::Approx(w));
  }
  t.at(0, 0) = 0;
  t.at(0, 1) = 0;
  t.at(0, 2) = 1;
  CHECK_THROWS_AS(project_down(t, 1.0), Error);
}

TEST_CASE("lower spins are an O(N-1) model in the projected conductances") {
  auto g = build_window(2);
  auto C = uniform_conductances(g, 1.5);
  int x = g->index({0, 0}), y = g->index({1, 0});
  std::vector<double> direct, resampled;
  SpinChain chain(C, 3, 30);
  for (int t = 0; t < 200; ++t) chain.sweep();
  for (int r = 0; r < 3000; ++r) {
    for (int t = 0; t < 3; ++t) chain.sweep();
    auto [low, Cl] = project_down(chain.state(), 1.5);
    direct.push_back(low.dot(x, y));
    SpinChain inner(Cl, 2, derive_seed(31, r));
    for (int t = 0; t < 30; ++t) inner.sweep();
    resampled.push_back(inner.state().dot(x, y));
  }
  CHECK(z_score(batch_means(direct), mean_estimate(resampled)) < 3);
}

TEST_CASE("north rooting") {
  auto g = build_torus(6);
  Rng rng = make_rng(8);
  SpinConfig s{g, 3, std::vector<double>(g->size() * 3)};
  for (int i = 0; i < g->size(); ++i) {
    auto v = sample_von_mises_fisher({0.0, 0.0, 0.0}, rng);
    for (int c = 0; c < 3; ++c) s.at(i, c) = v[c];
  }
  int v = g->index({2, 3});
  auto r = north_root(s, v);
  CHECK(r.at(v, 2) == 1.0);
  for (int i = 0; i < g->size(); ++i) {
    CHECK(std::abs(r.dot(i, i) - 1) < 1e-12);
    for (int j : g->neighbors(i)) CHECK(std::abs(r.dot(i, j) - s.dot(i, j)) < 1e-12);
  }
  auto R = rotation_to_north({0.0, 0.0, 1.0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(R[i * 3 + j] == (i == j ? 1.0 : 0.0));
  CHECK_THROWS_AS(rotation_to_north({0.0, 0.0, -1.0}), Error);
  // proper rotation
  auto Q = rotation_to_north({0.6, 0.0, -0.8});
  double det = Q[0] * (Q[4] * Q[8] - Q[5] * Q[7]) - Q[1] * (Q[3] * Q[8] - Q[5] * Q[6]) + Q[2] * (Q[3] * Q[7] - Q[4] * Q[6]);
  CHECK(det == doctest::Approx(1.0));
}

TEST_CASE("rerooting is translation invariant in law") {
  auto g = build_torus(8);
  auto C = uniform_conductances(g, 8.0);
  int o = g->index({0, 0}), v = g->index({3, 2});
  int z0 = g->index({1, 0}), zv = g->index({4, 2});
  std::vector<double> a, b;
  mcmc_spin(C, 3, {100, 4000, 1}, SpinAlgorithm::Wolff, 9, [&](const SpinConfig& s) {
    a.push_back(north_root(s, o).at(z0, 2));
    b.push_back(north_root(s, v).at(zv, 2));
  });
  CHECK(z_score(batch_means(a), batch_means(b)) < 3);
}

TEST_CASE("gradient tails") {
  auto g = build_torus(8);
  auto C = uniform_conductances(g, 64.0);
  std::vector<int> edges(g->edge_count());
  for (int e = 0; e < g->edge_count(); ++e) edges[e] = e;
  GradientTail tail(edges, 64.0, {0.0, 1.0, 2.0, 3.0, 4.0});
  mcmc_spin(C, 3, {200, 1000, 1}, SpinAlgorithm::Heatbath, 4, [&](const SpinConfig& s) { tail.add(s); }, 1);
  auto t = tail.tails();
  CHECK(t[0].mean == 1.0);
  for (size_t k = 1; k < t.size(); ++k) CHECK(t[k].mean <= t[k - 1].mean);
  CHECK(t[3].mean <= std::exp(-4.5) + 3 * t[3].stderr_);
}

TEST_CASE("gradient pairs") {
  auto t = build_torus(16);
  auto edge = [&](int x, int y, int dx, int dy) { return t->edge_between(t->index({x, y}), t->index({x + dx, y + dy})); };
  CHECK(GradientTwoPoint::gap_of(*t, edge(0, 0, 1, 0), edge(3, 0, 1, 0)) == 2);
  CHECK(GradientTwoPoint::gap_of(*t, edge(3, 0, 1, 0), edge(0, 0, 1, 0)) == 12);
  CHECK(GradientTwoPoint::gap_of(*t, edge(0, 0, 1, 0), edge(0, 0, 1, 0)) == -1);
  CHECK_THROWS_AS(GradientTwoPoint::gap_of(*t, edge(0, 0, 1, 0), edge(2, 0, 1, 0)), Error);
  CHECK_THROWS_AS(GradientTwoPoint::gap_of(*t, edge(0, 0, 1, 0), edge(3, 1, 1, 0)), Error);
  CHECK_THROWS_AS(GradientTwoPoint::gap_of(*t, edge(0, 0, 1, 0), edge(3, 0, 0, 1)), Error);
  auto w = build_window(6);
  auto we = [&](int x, int y) { return w->edge_between(w->index({x, y}), w->index({x + 1, y})); };
  CHECK(GradientTwoPoint::gap_of(*w, we(-3, 1), we(0, 1)) == 2);
  CHECK(GradientTwoPoint::gap_of(*w, we(0, 1), we(-3, 1)) == 2);

  GradientTwoPoint all(t, 4);
  CHECK(all.pair_count() == static_cast<size_t>(2 * t->size()));

  auto C = uniform_conductances(t, 4.0);
  auto var = GradientTwoPoint::for_edges(t, edge(2, 2, 1, 0), edge(2, 2, 1, 0));
  mcmc_spin(C, 2, {50, 200, 1}, SpinAlgorithm::Heatbath, 3, [&](const SpinConfig& s) { var.add(s); });
  CHECK(var.estimate().mean > 0);
}

TEST_CASE("field gradient correlations match the kernel and decay") {
  const int n = 64;
  SpectralTorusSampler s(n, 0.0, true);
  TorusKernel k(n, 0.0);
  std::vector<int> gaps{0, 2, 4, 8};
  std::vector<GradientTwoPoint> est;
  for (int d : gaps) est.emplace_back(s.graph(), d, 0);
  Rng rng = make_rng(5);
  for (int r = 0; r < 300; ++r) {
    auto f = s.sample(1, rng);
    for (auto& e : est) e.add_field(f);
  }
  double prev = 1e300;
  for (size_t i = 0; i < gaps.size(); ++i) {
    int D = gaps[i] + 1;
    double exact = 2 * k(D, 0) - k(D + 1, 0) - k(D - 1, 0);
    auto e = est[i].estimate();
    CHECK(exact < 0);
    CHECK(std::abs(e.mean - exact) < 5 * e.stderr_ + 1e-12);
    CHECK(std::abs(exact) < prev);
    prev = std::abs(exact);
  }
}

TEST_CASE("FK-Ising") {
  CHECK(fk_domination_p(1.0) == doctest::Approx(0.761594155955765).epsilon(1e-14));
  CHECK(std::abs(fk_domination_p(std::log(3.0) / 2) - 0.5) < 1e-15);
  CHECK(fk_domination_p(1.0) == doctest::Approx((1 - std::exp(-2.0)) / (1 + std::exp(-2.0))));
  auto t = build_torus(32);
  auto hot = fk_ising(t, {}, 0.2, {50, 200, 1}, 1);
  auto cold = fk_ising(t, {}, 1.0, {50, 200, 1}, 1);
  CHECK(hot.giant.mean < 0.1);
  CHECK(cold.giant.mean > 0.9);
  CHECK(cold.magnetization2.mean > 0.8);
  CHECK(cold.active_sites == t->size());

  std::vector<char> half(t->size(), 0);
  for (int i = 0; i < t->size(); ++i) half[i] = t->site(i).x < 16;
  auto strip = fk_ising(t, half, 1.0, {20, 50, 1}, 2);
  CHECK(strip.active_sites == t->size() / 2);
}

TEST_CASE("spin snapshots") {
  auto g = build_torus(4);
  SpinConfig s{g, 2, std::vector<double>(g->size() * 2, 0.0)};
  for (int i = 0; i < g->size(); ++i) s.at(i, 1) = 1;
  std::stringstream ss;
  save_spins(s, ss);
  auto f = load_field(ss);
  CHECK(f.values == s.theta);
}
