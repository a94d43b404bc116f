#include <boost/math/special_functions/erf.hpp>
#include <cmath>

#include "gfflab/error.hpp"
#include "gfflab/gff.hpp"

namespace gfflab {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;

// Upper tail Q(z) = P(Z > z).
double upper(double z) {
  if (z == std::numeric_limits<double>::infinity()) return 0.0;
  if (z == -std::numeric_limits<double>::infinity()) return 1.0;
  return 0.5 * boost::math::erfc(z / kSqrt2);
}

double upper_inv(double q) { return kSqrt2 * boost::math::erfc_inv(2.0 * q); }

double log_upper(double z) {
  double q = upper(z);
  if (q > 0) return std::log(q);
  return -0.5 * z * z - std::log(z * std::sqrt(2 * M_PI));
}

// Standard normal restricted to [a, b] with a > 0 deep in the tail.
double tail_sample(double a, double b, Rng& rng) {
  if (b - a < 1e-8 * std::max(1.0, a)) return a + (b - a) * uniform01(rng);
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    double z = a - std::log(uniform_open(rng)) / alpha;
    if (z > b) continue;
    if (std::log(uniform_open(rng)) <= -0.5 * (z - alpha) * (z - alpha)) return z;
  }
}

// Mass of [a,b] under N(0,1) computed on the side where it does not cancel.
double segment_mass(double a, double b) {
  if (a >= 0) return upper(a) - upper(b);
  if (b <= 0) return upper(-b) - upper(-a);
  return 1.0 - upper(b) - upper(-a);
}

double log_segment_mass(double a, double b) {
  double m = segment_mass(a, b);
  if (m > 0) return std::log(m);
  if (a >= 0) return log_upper(a);
  if (b <= 0) return log_upper(-b);
  return 0.0;
}

double sample_segment(double a, double b, Rng& rng) {
  if (a == b) return a;
  if (b <= 0) return -sample_segment(-b, -a, rng);
  double u = uniform_open(rng);
  if (a >= 0) {
    double qa = upper(a), qb = upper(b);
    if (qa - qb <= 1e-300 || qa < 1e-280) return tail_sample(a, b, rng);
    double q = qb + u * (qa - qb);
    double z = upper_inv(q);
    return std::clamp(z, a, b);
  }
  double lo = upper(-a);  // Phi(a)
  double mass = 1.0 - upper(b) - lo;
  double p = lo + u * mass;
  double z = -upper_inv(p);
  return std::clamp(z, a, b);
}
}  // namespace

bool Band::bounded() const {
  if (pinned) return true;
  for (const auto& iv : intervals)
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) return false;
  return !intervals.empty();
}

bool Band::contains(double v) const {
  if (pinned) return v == pin;
  for (const auto& iv : intervals)
    if (v >= iv.lo && v <= iv.hi) return true;
  return false;
}

double Band::closest(double v) const {
  if (pinned) return pin;
  require(!intervals.empty(), ErrorKind::InvalidArgument, "empty admissible set");
  double best = 0, dist = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals) {
    double c = std::clamp(v, iv.lo, iv.hi);
    if (std::abs(c - v) < dist) {
      dist = std::abs(c - v);
      best = c;
    }
  }
  return best;
}

BandSpec boundary_pinned_bands(GraphPtr g) {
  BandSpec spec;
  spec.graph = g;
  spec.bands.assign(g->size(), Band::whole());
  for (int i = 0; i < g->size(); ++i)
    if (g->is_boundary(i)) spec.bands[i] = Band::pin_at(0.0);
  return spec;
}

double truncated_normal(double mean, double sd, const std::vector<Interval>& parts, Rng& rng) {
  require(sd > 0, ErrorKind::InvalidArgument, "truncated normal needs sd > 0");
  require(!parts.empty(), ErrorKind::InvalidArgument, "empty admissible set");
  if (parts.size() == 1) {
    double a = (parts[0].lo - mean) / sd, b = (parts[0].hi - mean) / sd;
    return mean + sd * sample_segment(a, b, rng);
  }
  std::vector<double> logm(parts.size());
  double top = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < parts.size(); ++i) {
    double a = (parts[i].lo - mean) / sd, b = (parts[i].hi - mean) / sd;
    logm[i] = (a == b) ? -std::numeric_limits<double>::infinity() : log_segment_mass(a, b);
    top = std::max(top, logm[i]);
  }
  size_t pick = 0;
  if (top == -std::numeric_limits<double>::infinity()) {
    pick = static_cast<size_t>(uniform01(rng) * static_cast<double>(parts.size()));
    pick = std::min(pick, parts.size() - 1);
  } else {
    double total = 0;
    for (double& l : logm) total += (l = std::exp(l - top));
    double u = uniform01(rng) * total;
    for (pick = 0; pick + 1 < parts.size(); ++pick) {
      if (u < logm[pick]) break;
      u -= logm[pick];
    }
  }
  double a = (parts[pick].lo - mean) / sd, b = (parts[pick].hi - mean) / sd;
  return mean + sd * sample_segment(a, b, rng);
}

ConditionedGibbs::ConditionedGibbs(BandSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(make_rng(seed, 0, 0xc0d)) {
  require(spec_.graph != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(static_cast<int>(spec_.bands.size()) == spec_.graph->size(), ErrorKind::InvalidArgument,
          "one band per site required");
  bool any_bounded = false;
  for (int i = 0; i < spec_.graph->size(); ++i) {
    const Band& b = spec_.bands[i];
    if (!b.pinned) {
      require(!b.intervals.empty(), ErrorKind::InvalidArgument, "empty admissible set at site " + std::to_string(i));
      for (const auto& iv : b.intervals)
        require(iv.lo <= iv.hi, ErrorKind::InvalidArgument, "empty admissible interval at site " + std::to_string(i));
    }
    any_bounded |= b.bounded();
  }
  require(any_bounded, ErrorKind::InvalidArgument, "band specification is not well-posed: no bounded site");
  std::vector<char> pins(spec_.graph->size(), 0);
  for (int i = 0; i < spec_.graph->size(); ++i) pins[i] = spec_.bands[i].pinned;
  state_ = make_field(spec_.graph, 1, pins);
  state_.seed = seed;
  for (int i = 0; i < spec_.graph->size(); ++i) state_.values[i] = spec_.bands[i].closest(0.0);
}

void ConditionedGibbs::sweep() {
  const auto& g = *spec_.graph;
  auto& v = state_.values;
  for (int i = 0; i < g.size(); ++i) {
    const Band& b = spec_.bands[i];
    if (b.pinned) continue;
    int deg = g.degree(i);
    if (deg == 0) continue;
    double s = 0;
    for (int t : g.neighbors(i)) s += v[t];
    double mean = s / deg, sd = 1.0 / std::sqrt(static_cast<double>(deg));
    v[i] = truncated_normal(mean, sd, b.intervals, rng_);
  }
  ++sweeps_;
}

void sample_conditioned(const BandSpec& spec, const ChainSchedule& schedule, std::uint64_t seed,
                        const std::function<void(const VectorField&)>& sink) {
  require(schedule.burn_in >= 0 && schedule.samples >= 1 && schedule.thin >= 1, ErrorKind::InvalidArgument,
          "chain schedule needs burn_in >= 0, samples >= 1, thin >= 1");
  ConditionedGibbs chain(spec, seed);
  for (int s = 0; s < schedule.burn_in; ++s) chain.sweep();
  for (int k = 0; k < schedule.samples; ++k) {
    for (int t = 0; t < schedule.thin; ++t) chain.sweep();
    sink(chain.state());
  }
}

Estimate fluctuation_tail_probe(const FluctuationProbe& probe, const ChainSchedule& schedule, std::uint64_t seed,
                                int max_tries) {
  require(probe.graph != nullptr, ErrorKind::InvalidArgument, "null graph");
  const auto& g = *probe.graph;
  const int N = probe.N;
  require(N >= 1 && probe.p >= 1, ErrorKind::InvalidArgument, "probe needs N >= 1 and p >= 1");
  require(probe.site >= 0 && probe.site < g.size(), ErrorKind::InvalidArgument, "probe site out of range");
  std::vector<char> below = probe.below.empty() ? std::vector<char>(g.size(), 0) : probe.below;
  std::vector<char> above = probe.above.empty() ? std::vector<char>(g.size(), 0) : probe.above;
  require(static_cast<int>(below.size()) == g.size() && static_cast<int>(above.size()) == g.size(),
          ErrorKind::InvalidArgument, "mask size mismatch");
  bool any_below = false;
  for (int i = 0; i < g.size(); ++i) {
    require(!(below[i] && above[i]), ErrorKind::InvalidArgument, "site in both V_<= and V_>");
    require(!(above[i] && g.is_boundary(i)), ErrorKind::Degenerate,
            "conditioning has probability zero: boundary site required above the level");
    any_below |= below[i] && !g.is_boundary(i);
  }
  require(!(any_below && probe.level <= 0), ErrorKind::Degenerate,
          "conditioning has probability zero: level must be positive");
  Rng rng = make_rng(seed, 0, 0xf1c);
  std::vector<double> phi(static_cast<size_t>(g.size()) * N, 0.0);
  for (int i = 0; i < g.size(); ++i)
    if (above[i]) phi[static_cast<size_t>(i) * N] = probe.level + 1.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> mu(N), prop(N);
  const double level2 = probe.level * probe.level;
  auto sweep = [&] {
    for (int i = 0; i < g.size(); ++i) {
      if (g.is_boundary(i)) continue;
      int deg = g.degree(i);
      std::fill(mu.begin(), mu.end(), 0.0);
      for (int t : g.neighbors(i))
        for (int c = 0; c < N; ++c) mu[c] += phi[static_cast<size_t>(t) * N + c];
      double sd = 1.0 / std::sqrt(static_cast<double>(deg));
      for (int tries = 0; tries < max_tries; ++tries) {
        double n2 = 0;
        for (int c = 0; c < N; ++c) {
          prop[c] = mu[c] / deg + sd * gauss(rng);
          n2 += prop[c] * prop[c];
        }
        bool ok = (!below[i] || n2 <= level2) && (!above[i] || n2 > level2);
        if (ok) {
          for (int c = 0; c < N; ++c) phi[static_cast<size_t>(i) * N + c] = prop[c];
          break;
        }
      }
    }
  };
  for (int s = 0; s < schedule.burn_in; ++s) sweep();
  std::vector<double> obs;
  obs.reserve(schedule.samples);
  for (int k = 0; k < schedule.samples; ++k) {
    for (int t = 0; t < schedule.thin; ++t) sweep();
    double n2 = 0;
    for (int c = 0; c < N; ++c) {
      double v = phi[static_cast<size_t>(probe.site) * N + c];
      n2 += v * v;
    }
    obs.push_back(std::pow(n2, probe.p));
  }
  return batch_means(obs);
}

}  // namespace gfflab
