#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gfflab/gfflab.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kHugeThreshold = 4096;

int exit_code(gfl_status s) {
  if (s == GFL_OK) return 0;
  std::cerr << "gfflab: " << gfl_last_error() << '\n';
  return s == GFL_ECONFIG ? kConfigError : kRuntimeError;
}

int cmd_run(const std::string& config, const std::string& seed, int workers_flag, const std::string& out) {
  gfl_config* c = nullptr;
  gfl_status s = gfl_config_load(config.c_str(), &c);
  if (s != GFL_OK) return exit_code(s);
  if (!seed.empty()) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(seed.c_str(), &end, 10);
    if (!end || *end != '\0' || seed[0] == '-') {
      gfl_config_free(c);
      std::cerr << "gfflab: bad value '" << seed << "' for --seed\n";
      return kConfigError;
    }
    gfl_config_set_seed(c, v);
  }
  if (!out.empty()) gfl_config_set_out(c, out.c_str());
  int workers = gfl_config_workers(c);
  std::string source = "config";
  if (const char* env = std::getenv("GFFLAB_WORKERS")) {
    int w = std::atoi(env);
    if (w < 1) {
      gfl_config_free(c);
      std::cerr << "gfflab: GFFLAB_WORKERS must be a positive integer\n";
      return kConfigError;
    }
    workers = w;
    source = "env";
  }
  if (workers_flag > 0) {
    workers = workers_flag;
    source = "flag";
  }
  size_t n = 0;
  s = gfl_run(c, workers, source.c_str(), &n);
  if (s == GFL_OK)
    std::cout << "wrote " << n << " records for " << gfl_config_experiment(c) << " (workers " << workers << ", "
              << source << ")\n";
  gfl_config_free(c);
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice Gaussian free field and spin O(N) experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gfl_version());

  std::string config, seed, out;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run a configured experiment and append records");
  run->add_option("--config", config, "Config file (key = value)")->required();
  run->add_option("--seed", seed, "Master seed, overrides the config");
  run->add_option("--workers", workers, "Worker threads, overrides config and GFFLAB_WORKERS")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output directory, overrides the config");

  std::string field, image, palette = "hsv", overlay;
  std::vector<int> components;
  int massive = 0;
  double mass = 0;
  bool huge = false;
  auto* render = app.add_subcommand("render", "Render field angles as a PPM image");
  render->add_option("--field", field, "Field snapshot to render");
  render->add_option("--image", image, "Output image (PPM)")->required();
  render->add_option("--palette", palette, "hsv or gray");
  render->add_option("--components", components, "Two components to use when N != 2")->expected(2)->delimiter(',');
  render->add_option("--overlay", overlay, "Exit-set overlay parameters R,k");
  render->add_option("--massive", massive, "Sample a massive two-component field on the n-torus instead");
  render->add_option("--mass", mass, "Mass for --massive");
  render->add_option("--seed", seed, "Seed for --massive");
  render->add_flag("--huge", huge, "Allow renders above 4096 x 4096");

  std::string records;
  auto* report = app.add_subcommand("report", "Summarize records into tables and fit plots");
  report->add_option("--records", records, "records.jsonl")->required();
  report->add_option("--out", out, "Report directory")->required();

  app.add_subcommand("selftest", "Quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  if (run->parsed()) return cmd_run(config, seed, workers, out);

  if (render->parsed()) {
    if (massive > 0) {
      double bytes = gfl_render_memory_estimate(massive);
      std::cout << "memory estimate: " << bytes / (1024.0 * 1024.0) << " MiB for " << massive << "^2\n";
      if (massive > kHugeThreshold && !huge) {
        std::cerr << "gfflab: renders above " << kHugeThreshold << "^2 need --huge\n";
        return kConfigError;
      }
      if (seed.empty()) {
        std::cerr << "gfflab: --massive needs --seed\n";
        return kConfigError;
      }
      return exit_code(gfl_render_massive(massive, mass, std::strtoull(seed.c_str(), nullptr, 10), image.c_str(),
                                          palette.c_str()));
    }
    if (field.empty()) {
      std::cerr << "gfflab: render needs --field or --massive\n";
      return kConfigError;
    }
    if (!overlay.empty()) {
      double R = 0;
      int k = 0;
      if (std::sscanf(overlay.c_str(), "%lf,%d", &R, &k) != 2) {
        std::cerr << "gfflab: --overlay expects R,k\n";
        return kConfigError;
      }
      return exit_code(gfl_render_exit_overlay(field.c_str(), image.c_str(), R, k));
    }
    return exit_code(
        gfl_render_field(field.c_str(), image.c_str(), palette.c_str(), components.empty() ? nullptr : components.data()));
  }

  if (report->parsed()) {
    size_t files = 0;
    gfl_status s = gfl_report(records.c_str(), out.c_str(), &files);
    if (s == GFL_OK) std::cout << "wrote " << files << " report files to " << out << '\n';
    return exit_code(s);
  }

  int failures = 0;
  gfl_status s = gfl_selftest([](const char* line, void*) { std::cout << line << '\n'; }, nullptr, &failures);
  if (s != GFL_OK) return exit_code(s);
  return failures == 0 ? 0 : kRuntimeError;
}
