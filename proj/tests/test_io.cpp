#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>

#include <json.hpp>

#include "declab/io.hpp"

using namespace declab;

namespace {
EnergyTrace small_trace() {
  EnergyTrace t;
  t.times = {0.0, 0.5, 1.0};
  t.e_total = {1.0, 0.5, 0.25};
  t.e_local = {0.9, 0.4, 0.2};
  t.l2_sq = {2.0, 1.0, 0.5};
  t.residual = {0.0, 1e-12, 2e-12};
  return t;
}
} // namespace

TEST_CASE("trace CSV uses the fixed schema") {
  std::string csv = trace_csv(small_trace());
  CHECK(csv.rfind("t,E_total,E_r,l2_sq,residual\n", 0) == 0);
  CsvTable tab = parse_csv(csv);
  REQUIRE(tab.cells.size() == 3);
  auto e = tab.column("E_total");
  CHECK(e[2] == 0.25);
  auto r = tab.column("residual");
  CHECK(r[1] == 1e-12);
  CHECK_THROWS_AS(tab.column("nope"), Error);
}

TEST_CASE("sweep CSV uses the fixed schema") {
  ResolventSample s;
  s.s = 2.0;
  s.norm_w = 0.5;
  s.norm_gradw = 0.7;
  s.norm_f = 1.0;
  s.h1_ratio = 0.74;
  s.hf_ratio = 1.0;
  s.residual = 1e-11;
  s.method = "ldlt";
  s.converged = true;
  std::string csv = sweep_csv({s});
  CHECK(csv.rfind("s,norm_w,norm_gradw,norm_F,h1_ratio,hf_ratio,residual,method\n", 0) == 0);
  CsvTable tab = parse_csv(csv);
  CHECK(tab.column("h1_ratio")[0] == 0.74);
  CHECK(tab.cells[0].back() == "ldlt");
}

TEST_CASE("fit JSON carries the window") {
  DecayFit f;
  f.exponent = 1.5;
  f.intercept = 0.2;
  f.r2 = 0.999;
  f.t_min = 10;
  f.t_max = 90;
  f.n_points = 42;
  auto j = nlohmann::json::parse(fit_json(f));
  CHECK(j["exponent"] == 1.5);
  CHECK(j["window"][0] == 10.0);
  CHECK(j["window"][1] == 90.0);
  CHECK(j["n_points"] == 42);
}

TEST_CASE("snapshot blob layout: header then little-endian doubles") {
  DomainSpec s;
  s.dim = 1;
  s.box_halfwidth = 2.0;
  s.spacing = 1.0;
  s.damper_radius = 1.0;
  s.support_radius = 1.5;
  GridMask g = build_grid(s);
  Field f(g.size(), 0.0);
  f.v[2] = 3.5;
  std::string blob = snapshot_blob(f, g, 7.25);
  REQUIRE(blob.size() == 5 * 8 + 8 * g.size());
  auto read_u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(blob[off + i]);
    return v;
  };
  auto read_f64 = [&](std::size_t off) {
    std::uint64_t bits = read_u64(off);
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  };
  CHECK(read_u64(0) == 1);  // N
  CHECK(read_u64(8) == 5);  // nx
  CHECK(read_u64(16) == 1); // ny
  CHECK(read_f64(24) == 1.0);
  CHECK(read_f64(32) == 7.25);
  CHECK(read_f64(40 + 2 * 8) == 3.5);
}

TEST_CASE("SVG plotting: polylines, log-log filtering, empty input error") {
  PlotSeries s1{"energy", {1.0, 10.0, 100.0}, {1.0, 0.1, 0.01}};
  std::string svg = plot_svg({s1}, "demo", "t", "E", true);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("energy") != std::string::npos);

  PlotSeries bad{"nothing", {1.0, 2.0}, {-1.0, 0.0}};
  CHECK_THROWS_AS(plot_svg({bad}, "demo", "t", "E", true), Error);

  PlotSeries empty{"none", {}, {}};
  CHECK_THROWS_AS(plot_svg({empty}, "demo", "t", "E", false), Error);
}

TEST_CASE("output writer records every file in the manifest, written last") {
  auto dir = std::filesystem::temp_directory_path() / "declab_io_test";
  std::filesystem::remove_all(dir);
  {
    OutputWriter out(dir.string(), 0xabcdULL);
    out.emit("x/trace.csv", "t\n1\n");
    out.emit("fit.json", "{}\n");
    CHECK_FALSE(std::filesystem::exists(dir / "manifest.json"));
    out.finish();
  }
  CHECK(std::filesystem::exists(dir / "x" / "trace.csv"));
  auto j = nlohmann::json::parse(read_file((dir / "manifest.json").string()));
  REQUIRE(j["files"].size() == 2);
  CHECK(j["files"][0]["path"] == "x/trace.csv");
  CHECK(j["files"][0]["bytes"] == 4);
  CHECK(j.contains("config_hash"));
  CHECK(j.contains("version"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("gcc report serializations expose the verdict") {
  GccReport r;
  r.satisfied = false;
  r.t0_estimate = 50.0;
  r.worst_ray = {0.0, 0.0, 1.0, 0.0, 0.0};
  r.num_samples = 128;
  r.unresolved = 2;
  auto j = nlohmann::json::parse(gcc_json(r));
  CHECK(j["satisfied"] == false);
  CHECK(j["unresolved"] == 2);
  CHECK(gcc_text(r).find("VIOLATED") != std::string::npos);
  r.satisfied = true;
  CHECK(gcc_text(r).find("SATISFIED") != std::string::npos);
}

TEST_CASE("error JSON is machine readable") {
  auto j = nlohmann::json::parse(error_json("wave-solver", "BLOWUP", "boom"));
  CHECK(j["error"]["module"] == "wave-solver");
  CHECK(j["error"]["code"] == "BLOWUP");
}
