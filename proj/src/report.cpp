#include "gfflab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "gfflab/error.hpp"
#include "gfflab/percolation.hpp"

namespace gfflab {

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string safe_name(std::string s) {
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return s;
}

bool is_decay_observable(const ResultRecord& r) {
  return (r.observable == "connectivity" || r.observable == "xy_two_point") && r.params.contains("r");
}

}  // namespace

Image plot_decay(const std::vector<double>& d, const std::vector<double>& p, const std::vector<double>& se, double rate,
                 double intercept, double rate_ci) {
  const int W = 640, H = 480, M = 50;
  Image img(W, H);
  std::fill(img.rgb.begin(), img.rgb.end(), 255);
  double xmax = 0, ymin = 0, ymax = -1e300;
  ymin = 1e300;
  for (std::size_t i = 0; i < d.size(); ++i) {
    xmax = std::max(xmax, d[i]);
    if (p[i] <= 0) continue;
    ymin = std::min(ymin, std::log(std::max(p[i] - se[i], p[i] * 0.1)));
    ymax = std::max(ymax, std::log(p[i] + se[i]));
  }
  ymax = std::max(ymax, intercept);
  if (!(ymax > ymin)) ymax = ymin + 1;
  xmax = xmax > 0 ? xmax * 1.05 : 1;
  auto px = [&](double x) { return M + static_cast<int>(std::lround((x / xmax) * (W - 2 * M))); };
  auto py = [&](double y) { return H - M - static_cast<int>(std::lround((y - ymin) / (ymax - ymin) * (H - 2 * M))); };
  auto put = [&](int x, int y, std::array<std::uint8_t, 3> c) {
    if (x >= 0 && y >= 0 && x < W && y < H) img.set(x, y, c);
  };
  double xbar = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (p[i] > 0) {
      xbar += d[i];
      ++cnt;
    }
  xbar = cnt ? xbar / cnt : 0;
  const double ybar = intercept - rate * xbar;
  for (int X = M; X <= W - M; ++X) {
    double x = (X - M) / static_cast<double>(W - 2 * M) * xmax;
    if (std::isfinite(rate_ci)) {
      double y1 = ybar - (rate + rate_ci) * (x - xbar), y2 = ybar - (rate - rate_ci) * (x - xbar);
      int a = py(std::max(y1, y2)), b = py(std::min(y1, y2));
      for (int Y = std::max(a, M); Y <= std::min(b, H - M); ++Y) put(X, Y, {200, 215, 245});
    }
  }
  for (int X = M; X <= W - M; ++X) {
    double x = (X - M) / static_cast<double>(W - 2 * M) * xmax;
    int Y = py(intercept - rate * x);
    if (Y >= M && Y <= H - M) {
      put(X, Y, {200, 30, 30});
      put(X, Y + 1, {200, 30, 30});
    }
  }
  for (int X = M; X <= W - M; ++X) put(X, H - M, {0, 0, 0});
  for (int Y = M; Y <= H - M; ++Y) put(M, Y, {0, 0, 0});
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (p[i] <= 0) continue;
    int X = px(d[i]);
    int top = py(std::log(p[i] + se[i])), bot = py(std::log(std::max(p[i] - se[i], p[i] * 0.1)));
    for (int Y = top; Y <= bot; ++Y) put(X, Y, {0, 0, 0});
    int Y = py(std::log(p[i]));
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) put(X + a, Y + b, {0, 0, 0});
  }
  return img;
}

ReportOutput report_records(const std::vector<ResultRecord>& records, const std::string& out_dir) {
  require(!records.empty(), ErrorKind::InvalidArgument, "no records to report");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  require(!ec && fs::is_directory(out_dir), ErrorKind::Io, "cannot create report directory '" + out_dir + "'");
  ReportOutput out;
  out.records = static_cast<int>(records.size());
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRecord*>> groups;
  for (const auto& r : records) {
    if (!groups.count(r.experiment)) order.push_back(r.experiment);
    groups[r.experiment].push_back(&r);
  }
  out.sections = static_cast<int>(order.size());
  std::string summary_path = (fs::path(out_dir) / "summary.txt").string();
  std::ofstream summary(summary_path);
  require(static_cast<bool>(summary), ErrorKind::Io, "cannot write '" + summary_path + "'");
  out.files.push_back(summary_path);
  for (const auto& e : order) {
    const auto& rs = groups[e];
    std::string csv_path = (fs::path(out_dir) / (safe_name(e) + ".csv")).string();
    std::ofstream csv(csv_path);
    require(static_cast<bool>(csv), ErrorKind::Io, "cannot write '" + csv_path + "'");
    csv << "observable,params,estimate,stderr,replicas,seed,version,wall_time\n";
    summary << "== " << e << " (" << rs.size() << " records)\n";
    for (const auto* r : rs) {
      csv << r->observable << ',' << csv_quote(r->params.dump()) << ',' << fmt(r->estimate) << ',' << fmt(r->stderr_)
          << ',' << r->replicas << ',' << r->seed << ',' << r->version << ',' << fmt(r->wall_time) << '\n';
      summary << "  " << r->observable << ' ' << r->params.dump() << " = " << r->estimate << " +- " << r->stderr_ << '\n';
    }
    out.files.push_back(csv_path);

    std::map<std::string, std::vector<const ResultRecord*>> series;
    std::vector<std::string> keys;
    for (const auto* r : rs) {
      if (!is_decay_observable(*r)) continue;
      auto p = r->params;
      p.erase("r");
      std::string key = r->observable + " " + p.dump();
      if (!series.count(key)) keys.push_back(key);
      series[key].push_back(r);
    }
    int idx = 0;
    for (const auto& key : keys) {
      std::vector<DecayRow> rows;
      for (const auto* r : series[key])
        rows.push_back({r->params["r"].get<double>(), std::clamp(r->estimate, 0.0, 1.0), r->stderr_});
      int positive = 0;
      for (const auto& row : rows) positive += row.p > 0;
      if (positive < 2) {
        summary << "  (decay series " << key << ": fewer than two positive points, no fit)\n";
        continue;
      }
      DecayFit fit = fit_decay(rows);
      std::vector<double> d, p, se;
      for (const auto& row : rows) {
        d.push_back(row.distance);
        p.push_back(row.p);
        se.push_back(row.stderr_);
      }
      std::string img_path =
          (fs::path(out_dir) / (safe_name(e) + "_" + series[key].front()->observable + "_" + std::to_string(idx++) + ".ppm"))
              .string();
      write_ppm(plot_decay(d, p, se, fit.rate, fit.intercept, fit.rate_ci), img_path);
      out.files.push_back(img_path);
      summary << "  fit " << key << ": rate " << fit.rate << " +- " << fit.rate_ci << " (95%), R2 " << fit.r2 << '\n';
    }
  }
  return out;
}

ReportOutput report(const std::string& records_path, const std::string& out_dir) {
  return report_records(read_records(records_path), out_dir);
}

}  // namespace gfflab
