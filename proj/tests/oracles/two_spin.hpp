#pragma once

#include <cmath>

namespace oracle {

// E[theta(x).theta(y)] for two O(N) spins joined by one edge of conductance c.
// N = 2 by the periodic trapezoid rule (exponentially accurate), N = 3 in closed form.
inline double two_spin_correlation(int N, double c, int points = 4096) {
  if (N == 3) return 1.0 / std::tanh(c) - 1.0 / c;
  if (N == 1) return std::tanh(c);
  const double pi = 3.14159265358979323846;
  double num = 0, den = 0;
  for (int i = 0; i < points; ++i) {
    double t = 2 * pi * i / points;
    double w = std::exp(c * std::cos(t));
    num += std::cos(t) * w;
    den += w;
  }
  return num / den;
}

}  // namespace oracle
