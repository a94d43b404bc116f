#include <cmath>
#include <random>

#include "doctest.h"
#include "gfflab/random.hpp"
#include "gfflab/error.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/stats.hpp"
#include "oracles/dense_green.hpp"
#include "oracles/random_walk.hpp"

using namespace gfflab;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("green on the 3x3 box") {
  auto g = build_box(1);
  auto G = green(g, boundary_zeroset(*g), 0.0);
  int o = g->index({0, 0});
  CHECK(G(o, o) == doctest::Approx(0.25).epsilon(1e-14));
  for (int s : g->boundary_sites()) CHECK(G(s, o) == 0.0);
}

TEST_CASE("green matches a dense inverse built from coordinates") {
  for (double m : {0.0, 0.3}) {
    std::vector<oracle::Point> pts;
    auto D = oracle::dense_box_green(5, m, &pts);
    auto g = build_box(5);
    auto G = green(g, boundary_zeroset(*g), m);
    double worst = 0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = 0; j < pts.size(); ++j) {
        int a = g->index({pts[i].x, pts[i].y}), b = g->index({pts[j].x, pts[j].y});
        worst = std::max(worst, std::abs(G(a, b) - D(i, j)));
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("green is symmetric and solves the Dirichlet problem") {
  auto g = build_box(10);
  std::vector<char> z = boundary_zeroset(*g);
  z[g->index({3, -2})] = 1;
  for (double m : {0.0, 0.7}) {
    auto G = green(g, z, m);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, g->size() - 1);
    for (int t = 0; t < 30; ++t) {
      int a = pick(rng), b = pick(rng);
      CHECK(std::abs(G(a, b) - G(b, a)) < 1e-10);
    }
    for (int t = 0; t < 10; ++t) {
      int y = pick(rng);
      if (!z[y]) CHECK(G.residual(y) < 1e-8);
    }
  }
}

TEST_CASE("krylov and direct solvers agree") {
  auto g = build_box(12);
  auto z = boundary_zeroset(*g);
  auto A = green(g, z, 0.1, SolverKind::Direct);
  auto B = green(g, z, 0.1, SolverKind::Krylov);
  int o = g->index({1, 2});
  const auto& ca = A.column(o);
  const auto& cb = B.column(o);
  for (int i = 0; i < g->size(); ++i) CHECK(std::abs(ca[i] - cb[i]) < 1e-8);
}

TEST_CASE("singular problems are rejected") {
  auto t = build_torus(4);
  CHECK_THROWS_AS(green(t, std::vector<char>(t->size(), 0), 0.0), Error);
  CHECK_NOTHROW(green(t, std::vector<char>(t->size(), 0), 0.5));
}

TEST_CASE("torus kernels match dense inverses") {
  const int n = 6;
  std::vector<oracle::Point> pts;
  std::vector<bool> killed, none;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      pts.push_back({x, y});
      killed.push_back(x == 0 && y == 0);
      none.push_back(false);
    }
  auto Dm = oracle::dense_green(pts, none, 0.4, n);
  auto Dr = oracle::dense_green(pts, killed, 0.0, n);
  TorusKernel km(n, 0.4), k0(n, 0.0);
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts.size(); ++j) {
      CHECK(std::abs(km(pts[i].x - pts[j].x, pts[i].y - pts[j].y) - Dm(i, j)) < 1e-12);
      CHECK(std::abs(k0.rooted(pts[i].x, pts[i].y, pts[j].x, pts[j].y) - Dr(i, j)) < 1e-11);
    }
}

TEST_CASE("plane massive green at the origin") {
  // a torus many correlation lengths wide is indistinguishable from the plane
  for (double m : {0.5, 1.0, 2.0}) CHECK(plane_massive_green_origin(m) == doctest::Approx(TorusKernel(96, m)(0, 0)).epsilon(1e-10));
  // small mass: G_m(0) ~ (1/2pi) log(1/m) + const
  double a = plane_massive_green_origin(1e-3), b = plane_massive_green_origin(1e-4);
  CHECK((b - a) == doctest::Approx(std::log(10.0) / (2 * kPi)).epsilon(1e-3));
}

TEST_CASE("rooted green grows like log over pi") {
  TorusKernel k(512, 0.0);
  std::vector<double> x, y;
  for (int r = 4; r <= 32; r *= 2) {
    x.push_back(std::log(r));
    y.push_back(k.rooted(r, 0, r, 0));
  }
  auto fit = linear_fit(x, y);
  CHECK(std::abs(fit.slope * kPi - 1) < 0.03);
}

TEST_CASE("harmonic extension basics") {
  auto g = build_box(1);
  std::vector<double> v(g->size(), 0.0);
  v[g->index({1, 0})] = 1;
  v[g->index({-1, 0})] = 2;
  v[g->index({0, 1})] = 3;
  v[g->index({0, -1})] = 6;
  v[g->index({1, 1})] = 100;  // corners do not touch the centre
  auto h = harmonic_extension(g, std::vector<char>(g->size(), 0), v, 1);
  CHECK(h.at(g->index({0, 0}), 0) == doctest::Approx(3.0));

  auto b = build_box(6);
  std::vector<double> c(b->size() * 2);
  for (int i = 0; i < b->size(); ++i) {
    c[2 * i] = 1.5;
    c[2 * i + 1] = -2;
  }
  auto hc = harmonic_extension(b, std::vector<char>(b->size(), 0), c, 2);
  for (int i = 0; i < b->size(); ++i) {
    CHECK(hc.at(i, 0) == doctest::Approx(1.5));
    CHECK(hc.at(i, 1) == doctest::Approx(-2.0));
  }
}

TEST_CASE("harmonic extension: linearity and maximum principle") {
  auto g = build_box(7);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  std::vector<char> A(g->size(), 0);
  A[g->index({2, 2})] = 1;
  A[g->index({-3, 1})] = 1;
  std::vector<double> u(g->size()), w(g->size()), s(g->size());
  for (int i = 0; i < g->size(); ++i) {
    u[i] = gauss(rng);
    w[i] = gauss(rng);
    s[i] = 2 * u[i] - 3 * w[i];
  }
  auto hu = harmonic_extension(g, A, u, 1), hw = harmonic_extension(g, A, w, 1), hs = harmonic_extension(g, A, s, 1);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < g->size(); ++i)
    if (hu.prescribed[i]) {
      lo = std::min(lo, u[i]);
      hi = std::max(hi, u[i]);
    }
  for (int i = 0; i < g->size(); ++i) {
    CHECK(std::abs(hs.h[i] - (2 * hu.h[i] - 3 * hw.h[i])) < 1e-10);
    CHECK(hu.h[i] >= lo - 1e-12);
    CHECK(hu.h[i] <= hi + 1e-12);
  }
  auto single = harmonic_value_at(*g, hu.prescribed, u, 1, g->index({0, 0}));
  CHECK(single[0] == doctest::Approx(hu.h[g->index({0, 0})]).epsilon(1e-9));
}

TEST_CASE("harmonic extension equals the random-walk hitting average") {
  const int n = 4;
  auto g = build_box(n);
  std::vector<double> v(g->size(), 0.0);
  auto f = [](int x, int y) { return std::sin(x + 2.0 * y) + 0.3 * x; };
  for (int i = 0; i < g->size(); ++i) v[i] = f(g->site(i).x, g->site(i).y);
  auto h = harmonic_extension(g, std::vector<char>(g->size(), 0), v, 1);
  std::mt19937_64 rng(2024);
  Accumulator acc;
  auto stop = [n](int x, int y) { return std::max(std::abs(x), std::abs(y)) == n; };
  for (int w = 0; w < 400000; ++w) {
    auto [x, y] = oracle::walk_until(1, -1, stop, rng);
    acc.add(f(x, y));
  }
  INFO("exact ", h.at(g->index({1, -1}), 0), " mc ", acc.mean());
  CHECK(std::abs(acc.mean() - h.at(g->index({1, -1}), 0)) < 3.5 * acc.stderr_of_mean());
}

TEST_CASE("hitting probabilities") {
  auto g = build_window(5);
  int o = g->index({0, 0});
  std::vector<char> t(g->size(), 0);
  t[o] = 1;
  auto p = hitting_probs(g, t, o);
  CHECK(p[o] == 1.0);

  std::fill(t.begin(), t.end(), 0);
  for (int s : g->neighbors(o)) t[s] = 1;
  p = hitting_probs(g, t, o);
  for (int s : g->neighbors(o)) CHECK(p[s] == doctest::Approx(0.25).epsilon(1e-10));

  auto b = build_box(5);
  auto bz = boundary_zeroset(*b);
  bz[b->index({2, 1})] = 1;
  int v = b->index({-1, 0});
  p = hitting_probs(b, bz, v);
  double sum = 0;
  for (double q : p) sum += q;
  CHECK(std::abs(sum - 1) < 1e-10);

  // simulated walks
  std::mt19937_64 rng(7);
  const int W = 100000;
  std::vector<int> count(b->size(), 0);
  auto stop = [&](int x, int y) { return bz[b->index({x, y})] != 0; };
  for (int w = 0; w < W; ++w) {
    auto [x, y] = oracle::walk_until(-1, 0, stop, rng);
    ++count[b->index({x, y})];
  }
  for (int s = 0; s < b->size(); ++s)
    if (bz[s]) {
      double q = p[s], se = std::sqrt(std::max(q * (1 - q), 1e-12) / W);
      CHECK(std::abs(count[s] / double(W) - q) < 3.5 * se + 1e-9);
    }
}

TEST_CASE("test function normalisation and Dirichlet energy") {
  auto g = build_box(12);
  int x = g->index({-3, 0}), y = g->index({4, 2});
  auto mw = mw_test_function(g, x, y);
  CHECK(mw.S[y] == kPi);
  CHECK(mw.S[x] == 0.0);
  // sum of squared gradients of pi G(y,.)/G(y,y) is pi^2 / G(y,y)
  CHECK(std::abs(mw.energy - kPi * kPi / mw.green_yy) < 1e-8);
  CHECK_THROWS_AS(mw_test_function(g, x, x), Error);
}

TEST_CASE("test function energy decreases with separation") {
  auto g = build_box(64);
  int x = g->index({0, 0});
  double prev = 1e300;
  for (int d : {1, 4, 16, 48}) {
    double e = mw_test_function(g, x, g->index({d, 0})).energy;
    CHECK(e < prev);
    prev = e;
  }
}
