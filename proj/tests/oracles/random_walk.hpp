#pragma once

#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

// Simple random walk on Z^2 from (x, y) until stop(x, y) holds; returns the stopping point.
inline std::pair<int, int> walk_until(int x, int y, const std::function<bool(int, int)>& stop, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dir(0, 3);
  while (!stop(x, y)) {
    switch (dir(rng)) {
      case 0: ++x; break;
      case 1: --x; break;
      case 2: ++y; break;
      default: --y; break;
    }
  }
  return {x, y};
}

}  // namespace oracle
