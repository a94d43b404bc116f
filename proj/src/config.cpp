#include "gfflab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "gfflab/error.hpp"

namespace gfflab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& key, const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(ErrorKind::Config, "empty entry in list for key '" + key + "'");
    out.push_back(item);
  }
  if (out.empty()) fail(ErrorKind::Config, "grid '" + key + "' must be nonempty");
  return out;
}

template <class T>
T number(const std::string& key, const std::string& s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::Config, "bad value '" + s + "' for key '" + key + "'");
  return v;
}

template <class T>
std::vector<T> numbers(const std::string& key, const std::string& s) {
  std::vector<T> out;
  for (const auto& item : split_list(key, s)) out.push_back(number<T>(key, item));
  return out;
}

}  // namespace

std::vector<std::string> known_experiments() {
  return {"exit-set-scan",   "connectivity-decay", "isomorphism-suite", "corr-sandwich",
          "polyakov-limit",  "chessboard-tail",    "gm-suite",          "equator-diagnostic"};
}

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"experiment", [&](auto&, auto& v) { c.experiment = v; }},
      {"topology", [&](auto&, auto& v) { c.topology = v; }},
      {"window", [&](auto& k, auto& v) { c.window = number<int>(k, v); }},
      {"N", [&](auto& k, auto& v) { c.N = number<int>(k, v); }},
      {"beta", [&](auto& k, auto& v) { c.beta = numbers<double>(k, v); }},
      {"R", [&](auto& k, auto& v) { c.R = number<double>(k, v); }},
      {"k", [&](auto& k, auto& v) { c.k = number<int>(k, v); }},
      {"epsilon", [&](auto& k, auto& v) { c.epsilon = number<double>(k, v); }},
      {"n", [&](auto& k, auto& v) { c.n = numbers<int>(k, v); }},
      {"m", [&](auto& k, auto& v) { c.m = numbers<double>(k, v); }},
      {"K", [&](auto& k, auto& v) { c.K = numbers<double>(k, v); }},
      {"distances", [&](auto& k, auto& v) { c.distances = numbers<int>(k, v); }},
      {"p", [&](auto& k, auto& v) { c.p = number<double>(k, v); }},
      {"beta_ising", [&](auto& k, auto& v) { c.beta_ising = number<double>(k, v); }},
      {"observable", [&](auto&, auto& v) { c.observable = v; }},
      {"replicas", [&](auto& k, auto& v) { c.replicas = number<int>(k, v); }},
      {"sweeps", [&](auto& k, auto& v) { c.sweeps = number<int>(k, v); }},
      {"burn_in", [&](auto& k, auto& v) { c.burn_in = number<int>(k, v); }},
      {"thin", [&](auto& k, auto& v) { c.thin = number<int>(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.seed = number<std::uint64_t>(k, v); }},
      {"out", [&](auto&, auto& v) { c.out = v; }},
      {"workers", [&](auto& k, auto& v) { c.workers = number<int>(k, v); }},
      {"metric",
       [&](auto& k, auto& v) {
         try {
           c.metric = parse_metric(v);
         } catch (const Error&) {
           fail(ErrorKind::Config, "bad value '" + v + "' for key '" + k + "'");
         }
       }},
      {"palette", [&](auto&, auto& v) { c.palette = v; }},
  };
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Config, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) fail(ErrorKind::Config, "unknown config key '" + key + "'");
    if (value.empty()) fail(ErrorKind::Config, "empty value for key '" + key + "'");
    if (c.given.count(key)) fail(ErrorKind::Config, "duplicate config key '" + key + "'");
    it->second(key, value);
    c.given[key] = value;
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::Config, "cannot open config '" + path + "'");
  return parse_config(is);
}

void validate(const ExperimentConfig& c) {
  auto known = known_experiments();
  if (c.experiment.empty()) fail(ErrorKind::Config, "missing key 'experiment'");
  if (std::find(known.begin(), known.end(), c.experiment) == known.end())
    fail(ErrorKind::Config, "unknown experiment '" + c.experiment + "'");
  if (!c.seed) fail(ErrorKind::Config, "missing key 'seed' (no default seed is used)");
  auto positive = [](const char* key, double v) {
    if (!(v > 0)) fail(ErrorKind::Config, std::string("key '") + key + "' must be positive");
  };
  positive("N", c.N);
  positive("window", c.window);
  positive("k", c.k);
  positive("R", c.R);
  positive("replicas", c.replicas);
  positive("sweeps", c.sweeps);
  positive("thin", c.thin);
  positive("workers", c.workers);
  if (c.burn_in < 0) fail(ErrorKind::Config, "key 'burn_in' must be >= 0");
  if (!(c.epsilon > 0 && c.epsilon < 1)) fail(ErrorKind::Config, "key 'epsilon' must lie in (0,1)");
  if (!(c.p >= 0 && c.p <= 1)) fail(ErrorKind::Config, "key 'p' must lie in [0,1]");
  for (double b : c.beta) positive("beta", b);
  for (double m : c.m)
    if (m < 0) fail(ErrorKind::Config, "key 'm' must be >= 0");
  for (int n : c.n) positive("n", n);
  for (int d : c.distances)
    if (d < 0) fail(ErrorKind::Config, "key 'distances' must be >= 0");
  if (c.topology != "box" && c.topology != "torus" && c.topology != "window")
    fail(ErrorKind::Config, "bad value '" + c.topology + "' for key 'topology'");
}

}  // namespace gfflab
