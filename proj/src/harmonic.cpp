#include "gfflab/harmonic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>

#include "gfflab/error.hpp"

namespace gfflab {

namespace {
constexpr int kDirectLimit = 1'000'000;

using CG = Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>>;

Eigen::VectorXd cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol) {
  CG cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * A.rows()));
  cg.compute(A);
  Eigen::VectorXd x = cg.solve(b);
  require(cg.info() == Eigen::Success, ErrorKind::Singular,
          "conjugate gradient did not converge (error " + std::to_string(cg.error()) + ")");
  return x;
}
}  // namespace

std::vector<char> site_mask(const SiteGraph& g, const std::vector<int>& sites) {
  std::vector<char> m(g.size(), 0);
  for (int s : sites) {
    require(s >= 0 && s < g.size(), ErrorKind::InvalidArgument, "site index out of range");
    m[s] = 1;
  }
  return m;
}

std::vector<char> boundary_zeroset(const SiteGraph& g) { return g.boundary_mask(); }

DirichletProblem::DirichletProblem(GraphPtr g, std::vector<char> zeroset, double mass)
    : graph_(std::move(g)), zeroset_(std::move(zeroset)), mass_(mass) {
  require(graph_ != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(static_cast<int>(zeroset_.size()) == graph_->size(), ErrorKind::InvalidArgument,
          "zeroset mask size does not match the graph");
  require(mass_ >= 0 && std::isfinite(mass_), ErrorKind::InvalidArgument, "mass must be finite and >= 0");
  bool any_zero = false;
  for (char z : zeroset_) any_zero |= z != 0;
  require(any_zero || mass_ > 0, ErrorKind::Singular, "singular system: empty zeroset and zero mass");
  const int n = graph_->size();
  free_index_.assign(n, -1);
  for (int i = 0; i < n; ++i)
    if (!zeroset_[i]) {
      free_index_[i] = static_cast<int>(free_sites_.size());
      free_sites_.push_back(i);
    }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(free_sites_.size() * 5);
  for (int k = 0; k < free_count(); ++k) {
    int s = free_sites_[k];
    trip.emplace_back(k, k, diagonal(s));
    for (int t : graph_->neighbors(s))
      if (free_index_[t] >= 0) trip.emplace_back(k, free_index_[t], -1.0);
  }
  matrix_.resize(free_count(), free_count());
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
}

DirichletSolver::DirichletSolver(std::shared_ptr<const DirichletProblem> problem, SolverKind kind,
                                 double tolerance)
    : problem_(std::move(problem)), tolerance_(tolerance) {
  bool use_direct = kind == SolverKind::Direct ||
                    (kind == SolverKind::Auto && problem_->free_count() <= kDirectLimit);
  if (use_direct && problem_->free_count() > 0) {
    factor_ = std::make_unique<Factor>();
    factor_->compute(problem_->matrix());
    require(factor_->info() == Eigen::Success, ErrorKind::Singular,
            "sparse Cholesky failed: Dirichlet operator is singular");
  }
}

const Factor& DirichletSolver::factor() const {
  require(factor_ != nullptr, ErrorKind::Runtime, "no direct factorization available");
  return *factor_;
}

Eigen::VectorXd DirichletSolver::solve(const Eigen::VectorXd& rhs) const {
  require(rhs.size() == problem_->free_count(), ErrorKind::InvalidArgument, "rhs size mismatch");
  if (problem_->free_count() == 0) return rhs;
  if (factor_) return factor_->solve(rhs);
  return cg_solve(problem_->matrix(), rhs, tolerance_);
}

double DirichletSolver::log_det() const {
  const auto& L = factor().matrixL().nestedExpression();
  double s = 0;
  for (Eigen::Index i = 0; i < L.rows(); ++i) s += 2.0 * std::log(L.coeff(i, i));
  return s;
}

GreenFn::GreenFn(GraphPtr g, std::vector<char> zeroset, double mass, SolverKind kind)
    : solver_(std::make_shared<DirichletSolver>(
          std::make_shared<DirichletProblem>(std::move(g), std::move(zeroset), mass), kind)) {}

const std::vector<double>& GreenFn::column(int y) const {
  const auto& p = solver_->problem();
  require(y >= 0 && y < p.graph()->size(), ErrorKind::InvalidArgument, "site out of range");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(y);
    if (it != cache_.end()) return *it->second;
  }
  auto col = std::make_unique<std::vector<double>>(p.graph()->size(), 0.0);
  int k = p.free_index(y);
  if (k >= 0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(p.free_count());
    e[k] = 1.0;
    Eigen::VectorXd x = solver_->solve(e);
    for (int j = 0; j < p.free_count(); ++j) (*col)[p.free_site(j)] = x[j];
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(y, std::move(col));
  return *it->second;
}

double GreenFn::operator()(int x, int y) const {
  const auto& p = solver_->problem();
  if (p.zeroset()[x] || p.zeroset()[y]) return 0.0;
  return column(y)[x];
}

double GreenFn::residual(int y) const {
  const auto& p = solver_->problem();
  const auto& col = column(y);
  const auto& g = *p.graph();
  double worst = 0;
  for (int s : p.free_sites()) {
    double v = p.diagonal(s) * col[s];
    for (int t : g.neighbors(s)) v -= col[t];
    if (s == y) v -= 1.0;
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

void GreenFn::dump_csv(std::ostream& os, const std::vector<int>& sites) const {
  const auto& g = *graph();
  os << "x1,y1,x2,y2,G\n" << std::setprecision(17);
  for (int a : sites)
    for (int b : sites) {
      Site s = g.site(a), t = g.site(b);
      os << s.x << ',' << s.y << ',' << t.x << ',' << t.y << ',' << (*this)(a, b) << '\n';
    }
}

GreenFn green(GraphPtr g, const std::vector<char>& zeroset, double mass, SolverKind kind) {
  return GreenFn(std::move(g), zeroset, mass, kind);
}

HarmonicData harmonic_extension(GraphPtr g, const std::vector<char>& A, const std::vector<double>& values,
                                int N, SolverKind kind) {
  require(g != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
  require(static_cast<int>(A.size()) == g->size(), ErrorKind::InvalidArgument, "mask size mismatch");
  require(values.size() == static_cast<size_t>(g->size()) * N, ErrorKind::InvalidArgument,
          "values must hold N entries per site");
  HarmonicData out;
  out.graph = g;
  out.N = N;
  out.prescribed.assign(g->size(), 0);
  bool any = false;
  for (int i = 0; i < g->size(); ++i) {
    out.prescribed[i] = A[i] || g->is_boundary(i);
    any |= out.prescribed[i] != 0;
  }
  require(any, ErrorKind::InvalidArgument, "harmonic extension needs A or a boundary");
  out.h.assign(values.size(), 0.0);
  for (int i = 0; i < g->size(); ++i)
    if (out.prescribed[i])
      for (int c = 0; c < N; ++c) out.h[static_cast<size_t>(i) * N + c] = values[static_cast<size_t>(i) * N + c];
  auto problem = std::make_shared<DirichletProblem>(g, out.prescribed, 0.0);
  if (problem->free_count() == 0) return out;
  DirichletSolver solver(problem, kind);
  for (int c = 0; c < N; ++c) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(problem->free_count());
    for (int k = 0; k < problem->free_count(); ++k)
      for (int t : g->neighbors(problem->free_site(k)))
        if (out.prescribed[t]) rhs[k] += values[static_cast<size_t>(t) * N + c];
    Eigen::VectorXd x = solver.solve(rhs);
    for (int k = 0; k < problem->free_count(); ++k)
      out.h[static_cast<size_t>(problem->free_site(k)) * N + c] = x[k];
  }
  return out;
}

std::vector<double> harmonic_value_at(const SiteGraph& g, const std::vector<char>& prescribed,
                                      const std::vector<double>& values, int N, int site, SolverKind kind) {
  std::vector<double> out(N, 0.0);
  if (prescribed[site]) {
    for (int c = 0; c < N; ++c) out[c] = values[static_cast<size_t>(site) * N + c];
    return out;
  }
  std::vector<int> local(g.size(), -1);
  std::vector<int> comp{site};
  local[site] = 0;
  for (size_t q = 0; q < comp.size(); ++q)
    for (int t : g.neighbors(comp[q]))
      if (!prescribed[t] && local[t] < 0) {
        local[t] = static_cast<int>(comp.size());
        comp.push_back(t);
      }
  const int m = static_cast<int>(comp.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(m) * 5);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, N);
  bool touches = false;
  for (int k = 0; k < m; ++k) {
    int s = comp[k];
    trip.emplace_back(k, k, static_cast<double>(g.degree(s)));
    for (int t : g.neighbors(s)) {
      if (local[t] >= 0) {
        trip.emplace_back(k, local[t], -1.0);
      } else {
        touches = true;
        for (int c = 0; c < N; ++c) rhs(k, c) += values[static_cast<size_t>(t) * N + c];
      }
    }
  }
  require(touches, ErrorKind::Singular, "free component does not touch prescribed sites");
  SpMat A(m, m);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  bool direct = kind == SolverKind::Direct || (kind == SolverKind::Auto && m <= kDirectLimit);
  if (direct) {
    Factor f(A);
    require(f.info() == Eigen::Success, ErrorKind::Singular, "sparse Cholesky failed");
    for (int c = 0; c < N; ++c) out[c] = f.solve(Eigen::VectorXd(rhs.col(c)))[0];
  } else {
    for (int c = 0; c < N; ++c) out[c] = cg_solve(A, rhs.col(c), 1e-10)[0];
  }
  return out;
}

std::vector<double> hitting_probs(GraphPtr g, const std::vector<char>& target, int v) {
  require(g != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(v >= 0 && v < g->size(), ErrorKind::InvalidArgument, "site out of range");
  require(static_cast<int>(target.size()) == g->size(), ErrorKind::InvalidArgument, "mask size mismatch");
  std::vector<double> out(g->size(), 0.0);
  if (target[v]) {
    out[v] = 1.0;
    return out;
  }
  GreenFn G(g, target, 0.0);
  const auto& col = G.column(v);
  // P(first hit = s) = sum over free neighbours u of s of G(v,u)
  for (int s = 0; s < g->size(); ++s)
    if (target[s])
      for (int u : g->neighbors(s))
        if (!target[u]) out[s] += col[u];
  return out;
}

MWTestFunction mw_test_function(GraphPtr g, int x, int y) {
  require(g != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(x >= 0 && x < g->size() && y >= 0 && y < g->size(), ErrorKind::InvalidArgument,
          "site out of range");
  require(x != y, ErrorKind::InvalidArgument, "test function needs x != y");
  GreenFn G(g, site_mask(*g, {x}), 0.0, SolverKind::Direct);
  const auto& col = G.column(y);
  MWTestFunction out;
  out.green_yy = col[y];
  const double pi = boost::math::constants::pi<double>();
  out.S.resize(g->size());
  for (int v = 0; v < g->size(); ++v) out.S[v] = pi * col[v] / out.green_yy;
  out.S[y] = pi;
  out.S[x] = 0.0;
  for (const auto& e : g->edges()) {
    double d = out.S[e.u] - out.S[e.v];
    out.energy += d * d;
  }
  return out;
}

double plane_massive_green_origin(double mass) {
  require(mass > 0, ErrorKind::InvalidArgument, "plane Green's function needs positive mass");
  const double pi = boost::math::constants::pi<double>();
  const double m2 = mass * mass;
  auto f = [m2](double k) {
    double s = std::sin(0.5 * k);
    // A = 2 + m^2 + 4 sin^2(k/2);  A^2 - 4 = (A-2)(A+2)
    double am2 = m2 + 4 * s * s;
    return 1.0 / std::sqrt(am2 * (am2 + 4.0));
  };
  std::vector<double> cuts{0.0};
  for (double c = std::min(mass, 1.0); c < pi; c *= 4) cuts.push_back(c);
  cuts.push_back(pi);
  double total = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, 1e-13);
  return total / pi;
}

}  // namespace gfflab
