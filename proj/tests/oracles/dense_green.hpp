#pragma once

#include <Eigen/Dense>
#include <cstdlib>
#include <vector>

namespace oracle {

struct Point {
  int x, y;
};

// Dense inverse of (degree + m^2) I - adjacency on the free points, where adjacency is nearest
// neighbour among all listed points (killed points stay in the degree count).
inline Eigen::MatrixXd dense_green(const std::vector<Point>& pts, const std::vector<bool>& killed, double mass,
                                   int period = 0) {
  const int n = static_cast<int>(pts.size());
  auto adjacent = [&](const Point& p, const Point& q) {
    int dx = std::abs(p.x - q.x), dy = std::abs(p.y - q.y);
    if (period > 0) {
      dx = std::min(dx, period - dx);
      dy = std::min(dy, period - dy);
    }
    return dx + dy == 1;
  };
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && adjacent(pts[i], pts[j])) {
        Q(i, i) += 1;
        Q(i, j) -= 1;
      }
  for (int i = 0; i < n; ++i) Q(i, i) += mass * mass;
  std::vector<int> fr;
  for (int i = 0; i < n; ++i)
    if (!killed[i]) fr.push_back(i);
  Eigen::MatrixXd A(fr.size(), fr.size());
  for (std::size_t a = 0; a < fr.size(); ++a)
    for (std::size_t b = 0; b < fr.size(); ++b) A(a, b) = Q(fr[a], fr[b]);
  Eigen::MatrixXd Ai = A.inverse();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < fr.size(); ++a)
    for (std::size_t b = 0; b < fr.size(); ++b) G(fr[a], fr[b]) = Ai(a, b);
  return G;
}

// Square [-n,n]^2 listed row by row, outer ring killed.
inline Eigen::MatrixXd dense_box_green(int n, double mass, std::vector<Point>* out_pts = nullptr) {
  std::vector<Point> pts;
  std::vector<bool> killed;
  for (int y = -n; y <= n; ++y)
    for (int x = -n; x <= n; ++x) {
      pts.push_back({x, y});
      killed.push_back(std::max(std::abs(x), std::abs(y)) == n);
    }
  if (out_pts) *out_pts = pts;
  return dense_green(pts, killed, mass);
}

}  // namespace oracle
