#include "gfflab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "gfflab/error.hpp"

namespace gfflab {

void Accumulator::add(double x) {
  ++n_;
  double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void Accumulator::merge(const Accumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  long long n = n_ + o.n_;
  double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / static_cast<double>(n);
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / static_cast<double>(n);
  n_ = n;
}

double Accumulator::variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

double Accumulator::stderr_of_mean() const {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

Estimate mean_estimate(const std::vector<double>& xs) {
  Accumulator a;
  for (double x : xs) a.add(x);
  return a.estimate();
}

Estimate batch_means(const std::vector<double>& xs, int batches) {
  const long long n = static_cast<long long>(xs.size());
  if (n < 2 * batches) return mean_estimate(xs);
  long long per = n / batches;
  Accumulator outer;
  double total = 0;
  for (double x : xs) total += x;
  for (int b = 0; b < batches; ++b) {
    double s = 0;
    for (long long i = b * per; i < (b + 1) * per; ++i) s += xs[i];
    outer.add(s / static_cast<double>(per));
  }
  return {total / static_cast<double>(n), outer.stderr_of_mean(), n};
}

Estimate binomial_estimate(long long successes, long long trials) {
  require(trials > 0, ErrorKind::InvalidArgument, "binomial estimate needs trials > 0");
  double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1 - p) / static_cast<double>(trials)), trials};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::InvalidArgument, "KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_statistic_cdf(std::vector<double> a, const std::function<double(double)>& cdf) {
  require(!a.empty(), ErrorKind::InvalidArgument, "KS needs a nonempty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double F = cdf(a[i]);
    d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - F)});
  }
  return d;
}

double kolmogorov_pvalue(double d, double n_eff) {
  double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  const size_t n = x.size();
  require(n == y.size() && n >= 2, ErrorKind::InvalidArgument, "linear fit needs >= 2 matching points");
  require(w.empty() || w.size() == n, ErrorKind::InvalidArgument, "weight count mismatch");
  auto wt = [&](size_t i) { return w.empty() ? 1.0 : w[i]; };
  double sw = 0, sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sw += wt(i);
    sx += wt(i) * x[i];
    sy += wt(i) * y[i];
  }
  double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += wt(i) * (x[i] - mx) * (x[i] - mx);
    sxy += wt(i) * (x[i] - mx) * (y[i] - my);
    syy += wt(i) * (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::Degenerate, "linear fit needs distinct abscissae");
  LinearFit f;
  f.points = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (size_t i = 0; i < n; ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    sse += wt(i) * r * r;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (n > 2) {
    // Residual-scaled error so that the CI reflects the actual scatter.
    double s2 = sse / static_cast<double>(n - 2);
    f.slope_se = std::sqrt(s2 / sxx);
  }
  return f;
}

double student_t_quantile(double p, double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, p);
}

double normal_quantile(double p) {
  boost::math::normal dist;
  return boost::math::quantile(dist, p);
}

}  // namespace gfflab
