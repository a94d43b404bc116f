#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <mutex>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "gfflab/lattice.hpp"

namespace gfflab {

enum class SolverKind { Auto, Direct, Krylov };

using SpMat = Eigen::SparseMatrix<double>;
using Factor = Eigen::SimplicialLLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>>;

std::vector<char> site_mask(const SiteGraph& g, const std::vector<int>& sites);
std::vector<char> boundary_zeroset(const SiteGraph& g);

// (-Laplacian + m^2) restricted to the sites outside the zeroset.
class DirichletProblem {
 public:
  DirichletProblem(GraphPtr g, std::vector<char> zeroset, double mass);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<char>& zeroset() const { return zeroset_; }
  double mass() const { return mass_; }
  int free_count() const { return static_cast<int>(free_sites_.size()); }
  int free_index(int site) const { return free_index_[site]; }
  int free_site(int k) const { return free_sites_[k]; }
  const std::vector<int>& free_sites() const { return free_sites_; }
  const SpMat& matrix() const { return matrix_; }
  double diagonal(int site) const { return graph_->degree(site) + mass_ * mass_; }

 private:
  GraphPtr graph_;
  std::vector<char> zeroset_;
  double mass_;
  std::vector<int> free_index_;
  std::vector<int> free_sites_;
  SpMat matrix_;
};

// Solves with the Dirichlet operator, by sparse Cholesky or preconditioned CG.
class DirichletSolver {
 public:
  explicit DirichletSolver(std::shared_ptr<const DirichletProblem> problem,
                           SolverKind kind = SolverKind::Auto, double tolerance = 1e-10);

  const DirichletProblem& problem() const { return *problem_; }
  std::shared_ptr<const DirichletProblem> problem_ptr() const { return problem_; }
  bool direct() const { return factor_ != nullptr; }
  const Factor& factor() const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double log_det() const;

 private:
  std::shared_ptr<const DirichletProblem> problem_;
  std::unique_ptr<Factor> factor_;
  double tolerance_;
};

class GreenFn {
 public:
  GreenFn(GraphPtr g, std::vector<char> zeroset, double mass, SolverKind kind = SolverKind::Auto);

  const GraphPtr& graph() const { return solver_->problem().graph(); }
  const std::vector<char>& zeroset() const { return solver_->problem().zeroset(); }
  double mass() const { return solver_->problem().mass(); }
  const DirichletSolver& solver() const { return *solver_; }
  std::shared_ptr<const DirichletSolver> solver_ptr() const { return solver_; }

  double operator()(int x, int y) const;
  // G(., y) over all sites, zero on the zeroset. Columns are cached.
  const std::vector<double>& column(int y) const;
  // max |(-Laplacian + m^2) G(., y) - delta_y| over free sites.
  double residual(int y) const;
  void dump_csv(std::ostream& os, const std::vector<int>& sites) const;

 private:
  std::shared_ptr<const DirichletSolver> solver_;
  mutable std::mutex mu_;
  mutable std::unordered_map<int, std::unique_ptr<std::vector<double>>> cache_;
};

GreenFn green(GraphPtr g, const std::vector<char>& zeroset, double mass,
              SolverKind kind = SolverKind::Auto);

struct HarmonicData {
  GraphPtr graph;
  int N = 1;
  std::vector<char> prescribed;
  // site-major: h[site * N + c]
  std::vector<double> h;
  double at(int site, int c) const { return h[static_cast<size_t>(site) * N + c]; }
};

// Extends values given on A union boundary harmonically; values are site-major with N components
// and only read on prescribed sites.
HarmonicData harmonic_extension(GraphPtr g, const std::vector<char>& A, const std::vector<double>& values,
                                int N, SolverKind kind = SolverKind::Auto);

// Harmonic extension evaluated at one site, solving only on that site's free component.
std::vector<double> harmonic_value_at(const SiteGraph& g, const std::vector<char>& prescribed,
                                      const std::vector<double>& values, int N, int site,
                                      SolverKind kind = SolverKind::Auto);

// Law of the first site of target hit by simple random walk from v, indexed by site.
std::vector<double> hitting_probs(GraphPtr g, const std::vector<char>& target, int v);

struct MWTestFunction {
  std::vector<double> S;
  double energy = 0;
  double green_yy = 0;
};

// S(v) = pi G(y,v)/G(y,y) with G killed only at x.
MWTestFunction mw_test_function(GraphPtr g, int x, int y);

// Translation-invariant torus kernel k(v) = n^-2 sum_k e^{ik.v} / (lambda_k + m^2);
// with m = 0 the zero mode is dropped.
class TorusKernel {
 public:
  TorusKernel(int n, double mass);
  int n() const { return n_; }
  double mass() const { return mass_; }
  double operator()(int dx, int dy) const;
  // Green's function of the torus killed at the origin (m = 0 only).
  double rooted(int x1, int y1, int x2, int y2) const;

 private:
  int n_;
  double mass_;
  std::vector<double> table_;
};

// Massive Green's function of Z^2 at the origin, by one-dimensional quadrature.
double plane_massive_green_origin(double mass);

}  // namespace gfflab
