#include "gfflab/gfflab.h"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "gfflab/cable.hpp"
#include "gfflab/config.hpp"
#include "gfflab/error.hpp"
#include "gfflab/experiments.hpp"
#include "gfflab/exploration.hpp"
#include "gfflab/gff.hpp"
#include "gfflab/harmonic.hpp"
#include "gfflab/lattice.hpp"
#include "gfflab/percolation.hpp"
#include "gfflab/render.hpp"
#include "gfflab/report.hpp"
#include "gfflab/spin.hpp"

struct gfl_graph {
  gfflab::GraphPtr g;
};
struct gfl_field {
  gfflab::VectorField f;
};
struct gfl_config {
  gfflab::ExperimentConfig c;
};

namespace {

thread_local std::string last_error;

gfl_status code_of(gfflab::ErrorKind k) {
  switch (k) {
    case gfflab::ErrorKind::InvalidArgument: return GFL_EINVAL;
    case gfflab::ErrorKind::InvalidGeometry: return GFL_EGEOMETRY;
    case gfflab::ErrorKind::Singular: return GFL_ESINGULAR;
    case gfflab::ErrorKind::Degenerate: return GFL_EDEGENERATE;
    case gfflab::ErrorKind::Config: return GFL_ECONFIG;
    case gfflab::ErrorKind::Io: return GFL_EIO;
    case gfflab::ErrorKind::Runtime: return GFL_ERUNTIME;
  }
  return GFL_ERUNTIME;
}

template <class F>
gfl_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return GFL_OK;
  } catch (const gfflab::Error& e) {
    last_error = e.what();
    return code_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GFL_ERUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GFL_ERUNTIME;
  }
}

void need(const void* p, const char* what) {
  if (!p) gfflab::fail(gfflab::ErrorKind::InvalidArgument, std::string("null ") + what);
}

}  // namespace

extern "C" {

const char* gfl_version(void) { return gfflab::version_string(); }
const char* gfl_last_error(void) { return last_error.c_str(); }

gfl_status gfl_graph_box(int n, gfl_graph** out) {
  return guard([&] {
    need(out, "output");
    *out = new gfl_graph{gfflab::build_box(n)};
  });
}

gfl_status gfl_graph_window(int n, gfl_graph** out) {
  return guard([&] {
    need(out, "output");
    *out = new gfl_graph{gfflab::build_window(n)};
  });
}

gfl_status gfl_graph_torus(int n, gfl_graph** out) {
  return guard([&] {
    need(out, "output");
    *out = new gfl_graph{gfflab::build_torus(n)};
  });
}

void gfl_graph_free(gfl_graph* g) { delete g; }
int gfl_graph_size(const gfl_graph* g) { return g ? g->g->size() : 0; }

gfl_status gfl_green(const gfl_graph* g, double mass, int x1, int y1, int x2, int y2, double* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "output");
    int a = g->g->index({x1, y1}), b = g->g->index({x2, y2});
    gfflab::require(a >= 0 && b >= 0, gfflab::ErrorKind::InvalidArgument, "site outside the graph");
    auto G = gfflab::green(g->g, gfflab::boundary_zeroset(*g->g), mass);
    *out = G(a, b);
  });
}

gfl_status gfl_field_sample(const gfl_graph* g, int N, double mass, uint64_t seed, gfl_field** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "output");
    *out = new gfl_field{gfflab::sample_gff(g->g, N, mass, gfflab::boundary_zeroset(*g->g), seed)};
  });
}

gfl_status gfl_field_load(const char* path, gfl_field** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    *out = new gfl_field{gfflab::load_field(std::string(path))};
  });
}

gfl_status gfl_field_save(const gfl_field* f, const char* path) {
  return guard([&] {
    need(f, "field");
    need(path, "path");
    gfflab::save_field(f->f, std::string(path));
  });
}

gfl_status gfl_field_value(const gfl_field* f, int x, int y, int component, double* out) {
  return guard([&] {
    need(f, "field");
    need(out, "output");
    int i = f->f.domain->index({x, y});
    gfflab::require(i >= 0, gfflab::ErrorKind::InvalidArgument, "site outside the field domain");
    gfflab::require(component >= 0 && component < f->f.N, gfflab::ErrorKind::InvalidArgument, "component out of range");
    *out = f->f.at(i, component);
  });
}

int gfl_field_components(const gfl_field* f) { return f ? f->f.N : 0; }
void gfl_field_free(gfl_field* f) { delete f; }

gfl_status gfl_config_load(const char* path, gfl_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output");
    *out = new gfl_config{gfflab::load_config(path)};
  });
}

gfl_status gfl_config_parse(const char* text, gfl_config** out) {
  return guard([&] {
    need(text, "text");
    need(out, "output");
    std::istringstream is(text);
    *out = new gfl_config{gfflab::parse_config(is)};
  });
}

gfl_status gfl_config_set_seed(gfl_config* c, uint64_t seed) {
  return guard([&] {
    need(c, "config");
    c->c.seed = seed;
  });
}

gfl_status gfl_config_set_out(gfl_config* c, const char* dir) {
  return guard([&] {
    need(c, "config");
    need(dir, "directory");
    c->c.out = dir;
  });
}

gfl_status gfl_config_set_workers(gfl_config* c, int workers) {
  return guard([&] {
    need(c, "config");
    gfflab::require(workers >= 1, gfflab::ErrorKind::Config, "workers must be >= 1");
    c->c.workers = workers;
  });
}

int gfl_config_workers(const gfl_config* c) { return c ? c->c.workers : 0; }
const char* gfl_config_experiment(const gfl_config* c) { return c ? c->c.experiment.c_str() : ""; }
void gfl_config_free(gfl_config* c) { delete c; }

gfl_status gfl_run(const gfl_config* c, int workers, const char* workers_source, size_t* records_out) {
  return guard([&] {
    need(c, "config");
    gfflab::RunContext ctx;
    ctx.workers = workers > 0 ? workers : c->c.workers;
    ctx.workers_source = workers_source ? workers_source : "config";
    auto records = gfflab::run_experiment(c->c, ctx);
    gfflab::persist(records, c->c, ctx);
    if (records_out) *records_out = records.size();
  });
}

gfl_status gfl_render_field(const char* field_path, const char* image_path, const char* palette, const int* components) {
  return guard([&] {
    need(field_path, "field path");
    need(image_path, "image path");
    auto f = gfflab::load_field(std::string(field_path));
    std::optional<std::array<int, 2>> comps;
    if (components) comps = std::array<int, 2>{components[0], components[1]};
    gfflab::write_ppm(gfflab::render_angles(f, palette ? palette : "hsv", comps), image_path);
  });
}

gfl_status gfl_render_exit_overlay(const char* field_path, const char* image_path, double R, int k) {
  return guard([&] {
    need(field_path, "field path");
    need(image_path, "image path");
    auto f = gfflab::load_field(std::string(field_path));
    auto img = gfflab::render_angles(f, "hsv", f.N == 2 ? std::nullopt : std::optional<std::array<int, 2>>({0, 1}));
    gfflab::overlay_exit_set(img, gfflab::explore(f, R, k, false));
    gfflab::write_ppm(img, image_path);
  });
}

double gfl_render_memory_estimate(int n) { return gfflab::render_memory_estimate(n); }

gfl_status gfl_render_massive(int n, double mass, uint64_t seed, const char* image_path, const char* palette) {
  return guard([&] {
    need(image_path, "image path");
    gfflab::write_ppm(gfflab::render_massive(n, mass, seed, palette ? palette : "hsv"), image_path);
  });
}

gfl_status gfl_report(const char* records_path, const char* out_dir, size_t* files_out) {
  return guard([&] {
    need(records_path, "records path");
    need(out_dir, "output directory");
    auto r = gfflab::report(records_path, out_dir);
    if (files_out) *files_out = r.files.size();
  });
}

gfl_status gfl_selftest(void (*sink)(const char* line, void* user), void* user, int* failures) {
  return guard([&] {
    int failed = 0;
    auto check = [&](const char* name, bool ok) {
      failed += !ok;
      char line[256];
      std::snprintf(line, sizeof line, "%s %s", ok ? "PASS" : "FAIL", name);
      if (sink) sink(line, user);
    };
    auto run = [&](const char* name, auto&& body) {
      bool ok = false;
      try {
        ok = body();
      } catch (const std::exception&) {
        ok = false;
      }
      check(name, ok);
    };
    run("green on the 3x3 box is 1/4 at the centre", [] {
      auto g = gfflab::build_box(1);
      return std::abs(gfflab::green(g, gfflab::boundary_zeroset(*g), 0.0)(g->index({0, 0}), g->index({0, 0})) - 0.25) <
             1e-12;
    });
    run("bridge rule closes sign changes", [] {
      return gfflab::bridge_open_probability(1, -1) == 0 && gfflab::bridge_open_probability(0, 2) == 0 &&
             std::abs(gfflab::bridge_open_probability(1, 1) - (1 - std::exp(-2.0))) < 1e-15;
    });
    run("domination constant at beta 1", [] { return std::abs(gfflab::fk_domination_p(1.0) - 0.7615941559557649) < 1e-12; });
    run("decay fit recovers a noiseless rate", [] {
      std::vector<gfflab::DecayRow> rows;
      for (int r = 1; r <= 6; ++r) rows.push_back({double(r), std::exp(-0.5 * r), 1e-3});
      return std::abs(gfflab::fit_decay(rows).rate - 0.5) < 1e-9;
    });
    run("config rejects unknown keys", [] {
      std::istringstream is("experiment = gm-suite\nbogus = 1\n");
      try {
        gfflab::parse_config(is);
      } catch (const gfflab::Error& e) {
        return std::string(e.what()).find("bogus") != std::string::npos;
      }
      return false;
    });
    run("records independent of worker count", [] {
      std::istringstream is("experiment = isomorphism-suite\nwindow = 2\nN = 2\nreplicas = 64\nseed = 7\n");
      auto c = gfflab::parse_config(is);
      gfflab::RunContext one{1, "flag"}, two{2, "flag"};
      return gfflab::same_results(gfflab::run_experiment(c, one), gfflab::run_experiment(c, two));
    });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
