#include "gfflab/render.hpp"

#include <cmath>
#include <fstream>

#include "gfflab/error.hpp"
#include "gfflab/random.hpp"

namespace gfflab {

void Image::set(int x, int y, std::array<std::uint8_t, 3> c) {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[i] = c[0];
  rgb[i + 1] = c[1];
  rgb[i + 2] = c[2];
}

std::array<std::uint8_t, 3> Image::get(int x, int y) const {
  std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot open '" + path + "' for writing");
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  require(static_cast<bool>(os), ErrorKind::Io, "failed writing '" + path + "'");
}

Image read_ppm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open '" + path + "'");
  std::string magic;
  int w = 0, h = 0, maxv = 0;
  is >> magic >> w >> h >> maxv;
  require(magic == "P6" && w > 0 && h > 0 && maxv == 255, ErrorKind::Io, "unsupported image '" + path + "'");
  is.get();
  Image img(w, h);
  is.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
  require(static_cast<bool>(is), ErrorKind::Io, "truncated image '" + path + "'");
  return img;
}

std::array<std::uint8_t, 3> angle_color(double angle, const std::string& palette) {
  double t = angle / (2 * M_PI);
  t -= std::floor(t);
  if (palette == "gray") {
    // cyclic grey ramp
    double v = 0.5 - 0.5 * std::cos(2 * M_PI * t);
    auto g = static_cast<std::uint8_t>(std::lround(255 * v));
    return {g, g, g};
  }
  require(palette == "hsv", ErrorKind::InvalidArgument, "unknown palette '" + palette + "'");
  double h = 6 * t;
  int sector = static_cast<int>(h) % 6;
  double f = h - std::floor(h);
  double q = 1 - f;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = 1, g = f, b = 0; break;
    case 1: r = q, g = 1, b = 0; break;
    case 2: r = 0, g = 1, b = f; break;
    case 3: r = 0, g = q, b = 1; break;
    case 4: r = f, g = 0, b = 1; break;
    default: r = 1, g = 0, b = q; break;
  }
  auto u8 = [](double v) { return static_cast<std::uint8_t>(std::lround(255 * v)); };
  return {u8(r), u8(g), u8(b)};
}

Image render_angles(const VectorField& f, const std::string& palette, std::optional<std::array<int, 2>> components) {
  std::array<int, 2> c{0, 1};
  if (components) {
    c = *components;
    require(c[0] >= 0 && c[1] >= 0 && c[0] < f.N && c[1] < f.N && c[0] != c[1], ErrorKind::InvalidArgument,
            "bad component pair");
  } else {
    require(f.N == 2, ErrorKind::InvalidArgument, "angle rendering needs N = 2; choose two components");
  }
  const auto& g = *f.domain;
  Image img(g.width(), g.height());
  for (int i = 0; i < g.size(); ++i) {
    Site s = g.site(i);
    double a = std::atan2(f.at(i, c[1]), f.at(i, c[0]));
    img.set(s.x - g.min_x(), g.height() - 1 - (s.y - g.min_y()), angle_color(a, palette));
  }
  return img;
}

void overlay_exit_set(Image& img, const ExitSet& a) {
  const auto& g = *a.domain;
  require(img.width == g.width() && img.height == g.height(), ErrorKind::InvalidArgument, "image and set differ in size");
  for (int i = 0; i < g.size(); ++i) {
    if (!a.member[i]) continue;
    Site s = g.site(i);
    int x = s.x - g.min_x(), y = g.height() - 1 - (s.y - g.min_y());
    if (a.absorbed[i]) {
      img.set(x, y, {255, 255, 255});
      continue;
    }
    auto c = img.get(x, y);
    img.set(x, y, {static_cast<std::uint8_t>(c[0] / 4), static_cast<std::uint8_t>(c[1] / 4),
                   static_cast<std::uint8_t>(c[2] / 4)});
  }
}

double render_memory_estimate(int n) {
  const double sites = static_cast<double>(n) * n;
  // complex transform buffer, two planes, field copy, image
  return sites * (16.0 + 16.0 + 16.0 + 3.0);
}

Image render_massive(int n, double mass, std::uint64_t seed, const std::string& palette) {
  SpectralTorusSampler s(n, mass, mass == 0);
  Rng rng = make_rng(seed);
  std::vector<double> re(static_cast<std::size_t>(n) * n), im(re.size());
  s.sample_planes(rng, re.data(), im.data());
  Image img(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * n + x;
      img.set(x, n - 1 - y, angle_color(std::atan2(im[i], re[i]), palette));
    }
  return img;
}

}  // namespace gfflab
