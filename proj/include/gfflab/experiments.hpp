#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfflab/config.hpp"
#include "json.hpp"

namespace gfflab {

const char* version_string();

struct ResultRecord {
  std::string experiment;
  nlohmann::ordered_json params;
  std::string observable;
  double estimate = 0;
  double stderr_ = 0;
  long long replicas = 0;
  std::uint64_t seed = 0;
  std::string version;
  double wall_time = 0;
};

struct RunContext {
  int workers = 1;
  std::string workers_source = "config";
};

// Runs the configured experiment. Records depend only on the config and seed.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& c, const RunContext& ctx);

std::string to_json_line(const ResultRecord& r);
ResultRecord parse_record(const std::string& line);
std::vector<ResultRecord> read_records(const std::string& path);
// Appends records to DIR/records.jsonl and a manifest line to DIR/runs.jsonl.
void persist(const std::vector<ResultRecord>& records, const ExperimentConfig& c, const RunContext& ctx);

// Same records up to wall time.
bool same_results(const std::vector<ResultRecord>& a, const std::vector<ResultRecord>& b);

}  // namespace gfflab
