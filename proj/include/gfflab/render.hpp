#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gfflab/exploration.hpp"
#include "gfflab/gff.hpp"

namespace gfflab {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}
  void set(int x, int y, std::array<std::uint8_t, 3> c);
  std::array<std::uint8_t, 3> get(int x, int y) const;
};

void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

std::array<std::uint8_t, 3> angle_color(double angle, const std::string& palette);

// Hue of atan2(phi^c1, phi^c0) per site; N must be 2 unless components are given.
Image render_angles(const VectorField& f, const std::string& palette = "hsv",
                    std::optional<std::array<int, 2>> components = std::nullopt);
// Explored sites darkened, absorbed sites drawn white.
void overlay_exit_set(Image& img, const ExitSet& a);

// Bytes needed to sample and render an n x n two-component field.
double render_memory_estimate(int n);
// Massive two-component field on the n-torus.
Image render_massive(int n, double mass, std::uint64_t seed, const std::string& palette = "hsv");

}  // namespace gfflab
