#pragma once

#include <string>
#include <vector>

#include "declab/config.hpp"
#include "declab/parallel.hpp"

namespace declab {

// One row of the acceptance table. A skipped row carries the gate that
// blocked it (e.g. GCC_FAIL) in `note`.
struct CriterionResult {
  int id = 0;
  std::string name;
  enum class Status { Pass, Fail, Skipped } status = Status::Fail;
  std::string note;
  double elapsed_s = 0.0;
};

struct VerifyOptions {
  int threads = 1;
  std::string out_dir; // empty = config's output directory
  bool emit_files = true;
  // run only these criterion ids (empty = all). Rows that reuse another
  // row's run (4 needs 3, 7 needs 6) must be requested together.
  std::vector<int> only;
};

struct VerifyResult {
  std::vector<CriterionResult> rows;
  bool all_ok() const {
    for (const auto& r : rows)
      if (r.status == CriterionResult::Status::Fail) return false;
    return true;
  }
};

VerifyResult run_verify(const ExperimentConfig& cfg, const VerifyOptions& opt);

std::string verify_table(const VerifyResult& r);

} // namespace declab
