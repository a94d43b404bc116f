#pragma once

#include <string>
#include <vector>

#include "gfflab/experiments.hpp"
#include "gfflab/render.hpp"

namespace gfflab {

struct ReportOutput {
  std::vector<std::string> files;
  int sections = 0;
  int records = 0;
};

// Per-experiment CSV tables, a grouped text summary and one plot per decay series.
ReportOutput report(const std::string& records_path, const std::string& out_dir);
ReportOutput report_records(const std::vector<ResultRecord>& records, const std::string& out_dir);

// log p against distance with error bars, fitted line and 95% band.
Image plot_decay(const std::vector<double>& distance, const std::vector<double>& p, const std::vector<double>& se,
                 double rate, double intercept, double rate_ci);

}  // namespace gfflab
