// Acceptance suite: runs every criterion of the verification table on the
// shipped flagship scenario and prints one pass/fail line per criterion.
// Also exercises the GCC gating path on the trap scenario.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <thread>

#include "declab/config.hpp"
#include "declab/verify.hpp"

using namespace declab;

namespace {
int worker_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}
} // namespace

TEST_CASE("acceptance: all criteria pass on the exterior-disk scenario") {
  ExperimentConfig cfg = load_config("configs/exterior_disk.cfg");
  VerifyOptions opt;
  opt.threads = worker_threads();
  opt.out_dir = "build/acceptance_out";
  VerifyResult res = run_verify(cfg, opt);

  std::printf("%s", verify_table(res).c_str());
  std::fflush(stdout);

  REQUIRE(res.rows.size() == 12);
  for (const auto& row : res.rows) {
    INFO(row.id, " ", row.name, ": ", row.note);
    CHECK(row.status == CriterionResult::Status::Pass);
  }
}

TEST_CASE("acceptance: decay-rate rows are gated off when GCC fails") {
  ExperimentConfig trap = load_config("configs/trap_two_disks.cfg");
  trap.t_end = 10.0; // keep the gated run small
  VerifyOptions opt;
  opt.threads = worker_threads();
  opt.out_dir = "build/acceptance_trap_out";
  opt.only = {3, 4};
  VerifyResult res = run_verify(trap, opt);

  std::printf("%s", verify_table(res).c_str());
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(row.status == CriterionResult::Status::Skipped);
    CHECK(row.note == "GCC_FAIL");
  }
}
