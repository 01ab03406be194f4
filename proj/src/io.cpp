#include "declab/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "declab/hash.hpp"

namespace declab {

namespace {
constexpr const char* kModule = "cli-harness";
constexpr const char* kVersion = "declab 0.1.0";

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void append_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_le_double(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  append_le(out, bits);
}
} // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, kModule, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, kModule, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(Errc::IoError, kModule, "short write to " + path);
}

std::string trace_csv(const EnergyTrace& t) {
  std::ostringstream o;
  o << "t,E_total,E_r,l2_sq,residual\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    o << fmt(t.times[i]) << ',' << fmt(t.e_total[i]) << ',' << fmt(t.e_local[i]) << ','
      << fmt(t.l2_sq[i]) << ',' << fmt(t.residual[i]) << '\n';
  return o.str();
}

std::string cutoff_csv(const EnergyTrace& t) {
  std::ostringstream o;
  o << "t,cutoff_ratio\n";
  for (std::size_t i = 0; i < t.cutoff_ratio.size(); ++i)
    o << fmt(t.times[i]) << ',' << fmt(t.cutoff_ratio[i]) << '\n';
  return o.str();
}

std::string sweep_csv(const std::vector<ResolventSample>& samples) {
  std::ostringstream o;
  o << "s,norm_w,norm_gradw,norm_F,h1_ratio,hf_ratio,residual,method\n";
  for (const auto& s : samples)
    o << fmt(s.s) << ',' << fmt(s.norm_w) << ',' << fmt(s.norm_gradw) << ',' << fmt(s.norm_f)
      << ',' << fmt(s.h1_ratio) << ',' << fmt(s.hf_ratio) << ',' << fmt(s.residual) << ','
      << s.method << '\n';
  return o.str();
}

std::string compare_csv(const HeatCompareResult& r) {
  std::ostringstream o;
  o << "t,norm_u,norm_v,gap\n";
  for (std::size_t i = 0; i < r.times.size(); ++i)
    o << fmt(r.times[i]) << ',' << fmt(r.norm_u[i]) << ',' << fmt(r.norm_v[i]) << ','
      << fmt(r.gap[i]) << '\n';
  return o.str();
}

std::string fit_json(const DecayFit& f) {
  nlohmann::ordered_json j;
  j["exponent"] = f.exponent;
  j["intercept"] = f.intercept;
  j["r2"] = f.r2;
  j["window"] = {f.t_min, f.t_max};
  j["n_points"] = f.n_points;
  return j.dump(2) + "\n";
}

std::string gcc_json(const GccReport& r) {
  nlohmann::ordered_json j;
  j["satisfied"] = r.satisfied;
  j["t0_estimate"] = r.t0_estimate;
  j["worst_ray"] = {{"px", r.worst_ray.px},
                    {"py", r.worst_ray.py},
                    {"dx", r.worst_ray.dx},
                    {"dy", r.worst_ray.dy}};
  j["num_samples"] = r.num_samples;
  j["escape_radius"] = r.escape_radius;
  j["unresolved"] = r.unresolved;
  j["tangential_flagged"] = r.tangential_flagged;
  return j.dump(2) + "\n";
}

std::string gcc_text(const GccReport& r) {
  std::ostringstream o;
  o << (r.escape_radius > 0.0 ? "exterior geometric control" : "geometric control")
    << " check over " << r.num_samples << " rays: " << (r.satisfied ? "SATISFIED" : "VIOLATED")
    << "\n";
  if (r.satisfied) {
    o << "  worst first-hit time T0 ~ " << fmt(r.t0_estimate) << "\n";
  } else {
    o << "  " << r.unresolved << " ray(s) never reached the damping region";
    if (r.escape_radius > 0.0) o << " nor left B_" << fmt(r.escape_radius);
    o << "\n";
  }
  o << "  worst ray: pos (" << fmt(r.worst_ray.px) << ", " << fmt(r.worst_ray.py)
    << ") dir (" << fmt(r.worst_ray.dx) << ", " << fmt(r.worst_ray.dy) << ")\n";
  if (r.tangential_flagged) o << "  note: tangential hits were flagged along some rays\n";
  return o.str();
}

std::string sweep_summary_json(const SweepReport& r) {
  nlohmann::ordered_json j;
  j["sup_h1_intermediate"] = r.sup_h1_intermediate;
  j["sup_hf_high"] = r.sup_hf_high;
  j["all_converged"] = r.all_converged;
  j["n_intermediate"] = r.intermediate.size();
  j["n_high"] = r.high.size();
  if (!r.low_freq.samples.empty()) {
    j["low_freq"]["bounded"] = r.low_freq.bounded;
    j["low_freq"]["max_per_beta"] = r.low_freq.max_per_beta;
  }
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string error_json(const std::string& module, const std::string& code,
                       const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"module", module}, {"code", code}, {"message", message}};
  return j.dump() + "\n";
}

std::string snapshot_blob(const Field& f, const GridMask& g, double t) {
  std::string out;
  out.reserve(40 + 8 * f.size());
  append_le(out, static_cast<std::uint64_t>(g.dim));
  append_le(out, static_cast<std::uint64_t>(g.nx));
  append_le(out, static_cast<std::uint64_t>(g.ny));
  append_le_double(out, g.h);
  append_le_double(out, t);
  for (double v : f.v) append_le_double(out, v);
  return out;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  auto it = std::find(headers.begin(), headers.end(), name);
  if (it == headers.end())
    throw Error(Errc::PlotError, kModule, "no column '" + name + "' in CSV");
  std::size_t idx = static_cast<std::size_t>(it - headers.begin());
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& row : cells) {
    try {
      out.push_back(std::stod(row.at(idx)));
    } catch (...) {
      throw Error(Errc::PlotError, kModule, "non-numeric cell in column '" + name + "'");
    }
  }
  return out;
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(headers.begin(), headers.end(), name) != headers.end();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    if (first) {
      t.headers = row;
      first = false;
    } else {
      t.cells.push_back(row);
    }
  }
  return t;
}

std::string plot_svg(const std::vector<PlotSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label, bool log_log) {
  struct Pt {
    double x, y;
  };
  std::vector<std::vector<Pt>> data;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      double x = s.x[i], y = s.y[i];
      if (log_log) {
        if (x <= 0.0 || y <= 0.0) continue;
        x = std::log10(x);
        y = std::log10(y);
      }
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts.push_back({x, y});
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    data.push_back(std::move(pts));
  }
  std::size_t total = 0;
  for (const auto& d : data) total += d.size();
  if (total == 0) throw Error(Errc::PlotError, kModule, "no data to plot");
  if (xmax <= xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double W = 800, H = 500, ml = 70, mr = 20, mt = 40, mb = 50;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
    << "</text>\n";
  // axes
  o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  const int n_ticks = 5;
  for (int k = 0; k <= n_ticks; ++k) {
    double fx = xmin + (xmax - xmin) * k / n_ticks;
    double fy = ymin + (ymax - ymin) * k / n_ticks;
    double px = X(fx), py = Y(fy);
    o << "<line x1=\"" << px << "\" y1=\"" << H - mb << "\" x2=\"" << px << "\" y2=\""
      << H - mb + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px << "\" y=\"" << H - mb + 18
      << "\" text-anchor=\"middle\" font-size=\"11\">"
      << fmt(log_log ? std::pow(10.0, fx) : fx).substr(0, 9) << "</text>\n";
    o << "<line x1=\"" << ml - 5 << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\"" << py
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
      << "\" text-anchor=\"end\" font-size=\"11\">"
      << fmt(log_log ? std::pow(10.0, fy) : fy).substr(0, 9) << "</text>\n";
  }
  o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label
    << (log_log ? " (log)" : "") << "</text>\n";
  o << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
    << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
    << (mt + H - mb) / 2 << ")\">" << y_label << (log_log ? " (log)" : "") << "</text>\n";

  for (std::size_t si = 0; si < data.size(); ++si) {
    if (data[si].empty()) continue;
    o << "<polyline fill=\"none\" stroke=\"" << colors[si % 6]
      << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : data[si]) o << X(p.x) << "," << Y(p.y) << " ";
    o << "\"/>\n";
    o << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 * (si + 1)
      << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[si % 6] << "\">"
      << series[si].label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

OutputWriter::OutputWriter(std::string dir, std::uint64_t config_hash)
    : dir_(std::move(dir)), config_hash_(config_hash), started_ms_(now_ms()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(Errc::IoError, kModule, "cannot create output dir " + dir_);
}

std::string OutputWriter::emit(const std::string& rel_path, const std::string& content) {
  std::filesystem::path full = std::filesystem::path(dir_) / rel_path;
  std::error_code ec;
  std::filesystem::create_directories(full.parent_path(), ec);
  write_file(full.string(), content);
  entries_.push_back({rel_path, content.size(), fnv1a64(content)});
  return full.string();
}

void OutputWriter::finish() {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config_hash"] = hex64(config_hash_);
  j["started_ms"] = started_ms_;
  j["finished_ms"] = now_ms();
  auto files = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    files.push_back({{"path", e.path}, {"bytes", e.bytes}, {"fnv64", hex64(e.fnv)}});
  }
  j["files"] = files;
  write_file((std::filesystem::path(dir_) / "manifest.json").string(), j.dump(2) + "\n");
}

} // namespace declab
