#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <string>

#include "declab/config.hpp"

using namespace declab;

namespace {
const char* kMinimal = R"(
[domain]
dimension = 2
spacing = 0.1

[run]
t_end = 50
)";
}

TEST_CASE("minimal config gets documented defaults") {
  ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.dimension == 2);
  CHECK(c.spacing == 0.1);
  CHECK(c.t_end == 50.0);
  CHECK(c.damper_kind == "exterior_smooth");
  CHECK(c.damper_radius == 2.0);
  CHECK(c.support_radius == 3.0);
  CHECK(c.cfl_safety == 0.9);
  CHECK(c.gcc.n_pos == 200);
  CHECK(c.gcc.n_dir == 64);
  CHECK(c.gcc.t_max == 50.0);
  CHECK(c.gcc.eps_omega == 1e-3);
  // auto values resolve from the stated formulas
  CHECK(c.resolved_box_halfwidth() == doctest::Approx(3.0 + 25.0 + 1.0));
  CHECK(c.resolved_fit_t_min() == doctest::Approx(10.0));
  CHECK(c.resolved_fit_t_max() == doctest::Approx(45.0));
  CHECK(c.resolved_local_radius() == 3.0);
}

TEST_CASE("negative spacing is a validation error naming the field") {
  std::string bad = std::string(kMinimal);
  bad.replace(bad.find("0.1"), 3, "-0.1");
  try {
    parse_config(bad);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ValidationError);
    CHECK(std::string(e.what()).find("spacing") != std::string::npos);
  }
}

TEST_CASE("unknown keys and sections are rejected with a line number") {
  try {
    parse_config("[domain]\nnope = 3\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[nosuch]\nx = 1\n"), Error);
  CHECK_THROWS_AS(parse_config("x = 1\n"), Error);          // key before any section
  CHECK_THROWS_AS(parse_config("[domain]\njust text\n"), Error);
}

TEST_CASE("obstacles are repeatable") {
  ExperimentConfig c = parse_config(R"(
[domain]
obstacle = -2 0 0.5
obstacle = 2 0 0.5
damper_radius = 3
support_radius = 3.5
)");
  REQUIRE(c.obstacles.size() == 2);
  CHECK(c.obstacles[0].cx == -2.0);
  CHECK(c.obstacles[1].cx == 2.0);
  CHECK(c.obstacles[1].radius == 0.5);
}

TEST_CASE("round trip: parse, serialize, parse is the identity") {
  ExperimentConfig c = parse_config(kMinimal);
  ExperimentConfig c2 = parse_config(serialize_config(c));
  CHECK(c == c2);
  CHECK(config_hash(c) == config_hash(c2));
}

TEST_CASE("round trip holds for every shipped config") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator("configs")) {
    if (entry.path().extension() != ".cfg") continue;
    ++count;
    ExperimentConfig c = load_config(entry.path().string());
    ExperimentConfig c2 = parse_config(serialize_config(c));
    CHECK(c == c2);
  }
  CHECK(count >= 4);
}

TEST_CASE("band and resolvent validation") {
  std::string bad = std::string(kMinimal) + "\n[resolvent]\nintermediate_band = -1 4 40\n";
  CHECK_THROWS_AS(parse_config(bad), Error);
  std::string bad2 = std::string(kMinimal) + "\n[resolvent]\ntolerance = 0\n";
  CHECK_THROWS_AS(parse_config(bad2), Error);
  std::string bad3 = std::string(kMinimal) + "\n[damper]\nkind = mystery\n";
  CHECK_THROWS_AS(parse_config(bad3), Error);
}

TEST_CASE("config hash separates different configs") {
  ExperimentConfig a = parse_config(kMinimal);
  ExperimentConfig b = a;
  b.seed = a.seed + 1;
  CHECK(config_hash(a) != config_hash(b));
}
