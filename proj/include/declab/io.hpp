#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "declab/config.hpp"
#include "declab/metrics.hpp"
#include "declab/ray.hpp"
#include "declab/resolvent.hpp"
#include "declab/wave.hpp"

namespace declab {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// CSV schemas are fixed: traces are `t,E_total,E_r,l2_sq,residual`,
// sweeps `s,norm_w,norm_gradw,norm_F,h1_ratio,hf_ratio,residual,method`.
std::string trace_csv(const EnergyTrace& t);
std::string sweep_csv(const std::vector<ResolventSample>& samples);
std::string compare_csv(const HeatCompareResult& r);
std::string cutoff_csv(const EnergyTrace& t);

std::string fit_json(const DecayFit& f);
std::string gcc_json(const GccReport& r);
std::string gcc_text(const GccReport& r);
std::string sweep_summary_json(const SweepReport& r);
std::string error_json(const std::string& module, const std::string& code,
                       const std::string& message);

// Flat little-endian snapshot: i64 N, i64 nx, i64 ny, f64 h, f64 t, values.
std::string snapshot_blob(const Field& f, const GridMask& g, double t);

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> cells; // row-major
  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

// Hand-rolled polyline chart; log_log skips non-positive samples.
std::string plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_log);

// Collects every emitted file and writes the manifest last.
class OutputWriter {
public:
  OutputWriter(std::string dir, std::uint64_t config_hash);

  // relative path under the output directory; returns the full path
  std::string emit(const std::string& rel_path, const std::string& content);
  void finish(); // writes manifest.json

  const std::string& dir() const { return dir_; }

private:
  struct Entry {
    std::string path;
    std::size_t bytes;
    std::uint64_t fnv;
  };
  std::string dir_;
  std::uint64_t config_hash_;
  std::int64_t started_ms_;
  std::vector<Entry> entries_;
};

} // namespace declab
