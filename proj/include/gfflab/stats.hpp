#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gfflab {

struct Estimate {
  double mean = 0;
  double stderr_ = 0;
  long long samples = 0;
};

class Accumulator {
 public:
  void add(double x);
  void merge(const Accumulator& o);
  long long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  double stderr_of_mean() const;
  Estimate estimate() const { return {mean(), stderr_of_mean(), n_}; }

 private:
  long long n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

Estimate mean_estimate(const std::vector<double>& xs);
// Batch-means error for a correlated series.
Estimate batch_means(const std::vector<double>& xs, int batches = 32);
Estimate binomial_estimate(long long successes, long long trials);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_statistic_cdf(std::vector<double> a, const std::function<double(double)>& cdf);
double kolmogorov_pvalue(double d, double n_eff);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  double r2 = 0;
  int points = 0;
};

// Weighted least squares y = a + b x; weights may be empty for an unweighted fit.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w = {});
double student_t_quantile(double p, double dof);
double normal_quantile(double p);

}  // namespace gfflab
