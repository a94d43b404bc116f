#include "gfflab/gff.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gfflab/error.hpp"

namespace gfflab {

double VectorField::norm2(int site) const {
  double s = 0;
  for (int c = 0; c < N; ++c) {
    double v = at(site, c);
    s += v * v;
  }
  return s;
}

std::vector<double> VectorField::component(int c) const {
  std::vector<double> out(domain->size());
  for (int i = 0; i < domain->size(); ++i) out[i] = at(i, c);
  return out;
}

VectorField make_field(GraphPtr g, int N, std::vector<char> zeroset) {
  require(g != nullptr, ErrorKind::InvalidArgument, "null graph");
  require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
  VectorField f;
  f.domain = std::move(g);
  f.N = N;
  f.zeroset = zeroset.empty() ? std::vector<char>(f.domain->size(), 0) : std::move(zeroset);
  require(static_cast<int>(f.zeroset.size()) == f.domain->size(), ErrorKind::InvalidArgument,
          "zeroset mask size mismatch");
  f.values.assign(static_cast<size_t>(f.domain->size()) * N, 0.0);
  return f;
}

FieldSampler::FieldSampler(GraphPtr g, std::vector<char> zeroset, double mass)
    : solver_(std::make_shared<DirichletSolver>(
          std::make_shared<DirichletProblem>(std::move(g), std::move(zeroset), mass), SolverKind::Direct)) {}

FieldSampler::FieldSampler(std::shared_ptr<const DirichletSolver> solver) : solver_(std::move(solver)) {
  require(solver_->direct(), ErrorKind::InvalidArgument, "exact sampling needs a direct factorization");
}

VectorField FieldSampler::sample(int N, Rng& rng) const {
  const auto& p = solver_->problem();
  VectorField f = make_field(p.graph(), N, p.zeroset());
  f.mass = p.mass();
  const int m = p.free_count();
  if (m == 0) return f;
  const auto& fac = solver_->factor();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd z(m);
  for (int c = 0; c < N; ++c) {
    for (int i = 0; i < m; ++i) z[i] = gauss(rng);
    Eigen::VectorXd y = fac.matrixU().solve(z);
    Eigen::VectorXd x = fac.permutationPinv() * y;
    for (int k = 0; k < m; ++k) f.at(p.free_site(k), c) = x[k];
  }
  return f;
}

VectorField sample_gff(GraphPtr g, int N, double mass, const std::vector<char>& zeroset, std::uint64_t seed) {
  FieldSampler s(std::move(g), zeroset, mass);
  Rng rng = make_rng(seed);
  VectorField f = s.sample(N, rng);
  f.seed = seed;
  return f;
}

VectorField sample_rooted_plane(int n, int N, std::uint64_t seed) {
  require(n >= 3, ErrorKind::InvalidGeometry, "rooted window needs n >= 3");
  SpectralTorusSampler s(n, 0.0, true);
  Rng rng = make_rng(seed);
  VectorField f = s.sample(N, rng);
  f.seed = seed;
  return f;
}

namespace {
constexpr const char* kMagic = "gfflab-field 1";

bool is_boundary_zeroset(const VectorField& f) {
  for (int i = 0; i < f.domain->size(); ++i)
    if ((f.zeroset[i] != 0) != f.domain->is_boundary(i)) return false;
  return true;
}
}  // namespace

void save_field(const VectorField& f, std::ostream& os) {
  const auto& g = *f.domain;
  require(g.topology() != Topology::Annulus, ErrorKind::InvalidArgument, "annulus fields are not serializable");
  os << kMagic << '\n';
  os << "topology " << to_string(g.topology()) << '\n';
  os << "n " << g.radius() << '\n';
  os << "N " << f.N << '\n';
  os << "mass " << std::setprecision(17) << f.mass << '\n';
  os << "seed " << f.seed << '\n';
  std::vector<int> zs;
  for (int i = 0; i < g.size(); ++i)
    if (f.zeroset[i]) zs.push_back(i);
  std::vector<int> bs = g.boundary_sites();
  os << "marked";
  for (int b : bs) os << ' ' << b;
  os << '\n';
  if (is_boundary_zeroset(f)) {
    os << "zeroset marked\n";
  } else {
    os << "zeroset";
    for (int z : zs) os << ' ' << z;
    os << '\n';
  }
  os << "layout planes row-major f64le " << g.width() << 'x' << g.height() << '\n';
  os << "end\n";
  std::vector<double> plane(static_cast<size_t>(g.width()) * g.height(), 0.0);
  for (int c = 0; c < f.N; ++c) {
    for (int i = 0; i < g.size(); ++i) {
      Site s = g.site(i);
      plane[static_cast<size_t>(s.y - g.min_y()) * g.width() + (s.x - g.min_x())] = f.at(i, c);
    }
    os.write(reinterpret_cast<const char*>(plane.data()), static_cast<std::streamsize>(plane.size() * sizeof(double)));
  }
  require(static_cast<bool>(os), ErrorKind::Io, "failed writing field snapshot");
}

void save_field(const VectorField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot open '" + path + "' for writing");
  save_field(f, os);
}

VectorField load_field(std::istream& is) {
  std::string line;
  std::getline(is, line);
  require(line == kMagic, ErrorKind::Io, "not a field snapshot");
  std::string topo;
  int n = -1, N = 0;
  double mass = 0;
  std::uint64_t seed = 0;
  std::vector<int> marked, zs;
  bool zs_marked = false;
  while (std::getline(is, line) && line != "end") {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "topology") ls >> topo;
    else if (key == "n") ls >> n;
    else if (key == "N") ls >> N;
    else if (key == "mass") ls >> mass;
    else if (key == "seed") ls >> seed;
    else if (key == "marked") {
      int v;
      while (ls >> v) marked.push_back(v);
    } else if (key == "zeroset") {
      std::string tok;
      while (ls >> tok) {
        if (tok == "marked") zs_marked = true;
        else zs.push_back(std::stoi(tok));
      }
    }
  }
  require(line == "end" && n >= 0 && N >= 1, ErrorKind::Io, "truncated field snapshot header");
  std::shared_ptr<SiteGraph> g;
  if (topo == "box") g = build_box(n);
  else if (topo == "window") g = build_window(n);
  else if (topo == "torus") g = build_torus(n);
  else fail(ErrorKind::Io, "unsupported snapshot topology '" + topo + "'");
  GraphPtr domain = g;
  if (topo != "box" && !marked.empty()) domain = g->with_boundary(marked);
  std::vector<char> zmask = zs_marked ? domain->boundary_mask() : site_mask(*domain, zs);
  VectorField f = make_field(domain, N, zmask);
  f.mass = mass;
  f.seed = seed;
  std::vector<double> plane(static_cast<size_t>(domain->width()) * domain->height());
  for (int c = 0; c < N; ++c) {
    is.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(plane.size() * sizeof(double)));
    require(static_cast<bool>(is), ErrorKind::Io, "truncated field snapshot data");
    for (int i = 0; i < domain->size(); ++i) {
      Site s = domain->site(i);
      f.at(i, c) = plane[static_cast<size_t>(s.y - domain->min_y()) * domain->width() + (s.x - domain->min_x())];
    }
  }
  return f;
}

VectorField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open '" + path + "'");
  return load_field(is);
}

}  // namespace gfflab
