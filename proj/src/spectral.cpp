#include <fftw3.h>

#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <mutex>

#include "gfflab/error.hpp"
#include "gfflab/gff.hpp"
#include "gfflab/harmonic.hpp"

namespace gfflab {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwBuffer {
  explicit FftwBuffer(size_t n) : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    require(data != nullptr, ErrorKind::Runtime, "out of memory allocating an FFT buffer");
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

fftw_plan make_plan(int n, fftw_complex* buf) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan p = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  require(p != nullptr, ErrorKind::Runtime, "FFTW planning failed");
  return p;
}

void destroy_plan(fftw_plan p) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(p);
}

double eigenvalue(int n, int k1, int k2) {
  const double two_pi = 2 * boost::math::constants::pi<double>();
  return 4.0 - 2.0 * std::cos(two_pi * k1 / n) - 2.0 * std::cos(two_pi * k2 / n);
}
}  // namespace

TorusKernel::TorusKernel(int n, double mass) : n_(n), mass_(mass) {
  require(n >= 3, ErrorKind::InvalidGeometry, "torus side must be at least 3");
  require(mass >= 0, ErrorKind::InvalidArgument, "mass must be >= 0");
  const size_t total = static_cast<size_t>(n) * n;
  FftwBuffer buf(total);
  fftw_plan plan = make_plan(n, buf.data);
  const double m2 = mass * mass;
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      size_t i = static_cast<size_t>(k2) * n + k1;
      double lam = eigenvalue(n, k1, k2) + m2;
      buf.data[i][0] = (k1 == 0 && k2 == 0 && mass == 0) ? 0.0 : 1.0 / lam;
      buf.data[i][1] = 0.0;
    }
  fftw_execute(plan);
  destroy_plan(plan);
  table_.resize(total);
  const double inv = 1.0 / static_cast<double>(total);
  for (size_t i = 0; i < total; ++i) table_[i] = buf.data[i][0] * inv;
}

double TorusKernel::operator()(int dx, int dy) const {
  int x = ((dx % n_) + n_) % n_, y = ((dy % n_) + n_) % n_;
  return table_[static_cast<size_t>(y) * n_ + x];
}

double TorusKernel::rooted(int x1, int y1, int x2, int y2) const {
  require(mass_ == 0, ErrorKind::InvalidArgument, "rooted torus kernel is defined for m = 0");
  auto a = [&](int dx, int dy) { return (*this)(0, 0) - (*this)(dx, dy); };
  return a(x1, y1) + a(x2, y2) - a(x1 - x2, y1 - y2);
}

SpectralTorusSampler::SpectralTorusSampler(int n, double mass, bool rooted)
    : n_(n), mass_(mass), rooted_(rooted) {
  require(n >= 3, ErrorKind::InvalidGeometry, "torus side must be at least 3");
  require(mass >= 0, ErrorKind::InvalidArgument, "mass must be >= 0");
  require(rooted || mass > 0, ErrorKind::Singular, "unrooted massless torus field is singular");
  auto g = build_torus(n);
  graph_ = rooted ? GraphPtr(g->with_boundary({0})) : GraphPtr(g);
  const size_t total = static_cast<size_t>(n) * n;
  scale_.resize(total);
  const double m2 = mass * mass;
  for (int k2 = 0; k2 < n; ++k2)
    for (int k1 = 0; k1 < n; ++k1) {
      size_t i = static_cast<size_t>(k2) * n + k1;
      double lam = eigenvalue(n, k1, k2) + m2;
      scale_[i] = (k1 == 0 && k2 == 0 && mass == 0) ? 0.0 : 1.0 / (std::sqrt(lam) * n);
    }
  FftwBuffer probe(total);
  plan_ = make_plan(n, probe.data);
}

SpectralTorusSampler::~SpectralTorusSampler() {
  if (plan_) destroy_plan(static_cast<fftw_plan>(plan_));
}

void SpectralTorusSampler::sample_planes(Rng& rng, double* re, double* im) const {
  const size_t total = static_cast<size_t>(n_) * n_;
  FftwBuffer buf(total);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // W_k complex normal with E|W|^2 = 2, so Re and Im of the output both carry the full covariance.
  for (size_t i = 0; i < total; ++i) {
    double a = gauss(rng), b = gauss(rng);
    buf.data[i][0] = a * scale_[i];
    buf.data[i][1] = b * scale_[i];
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_), buf.data, buf.data);
  double r0 = rooted_ ? buf.data[0][0] : 0.0;
  double i0 = rooted_ ? buf.data[0][1] : 0.0;
  for (size_t i = 0; i < total; ++i) {
    if (re) re[i] = buf.data[i][0] - r0;
    if (im) im[i] = buf.data[i][1] - i0;
  }
  if (rooted_) {
    if (re) re[0] = 0.0;
    if (im) im[0] = 0.0;
  }
}

VectorField SpectralTorusSampler::sample(int N, Rng& rng) const {
  require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
  VectorField f = make_field(graph_, N, rooted_ ? site_mask(*graph_, {0}) : std::vector<char>{});
  f.mass = mass_;
  const size_t total = static_cast<size_t>(n_) * n_;
  std::vector<double> re(total), im(total);
  for (int c = 0; c < N; c += 2) {
    sample_planes(rng, re.data(), c + 1 < N ? im.data() : nullptr);
    // torus sites are stored row-major, matching the FFT layout
    for (size_t i = 0; i < total; ++i) {
      f.values[i * N + c] = re[i];
      if (c + 1 < N) f.values[i * N + c + 1] = im[i];
    }
  }
  return f;
}

}  // namespace gfflab
