#pragma once

#include <string>
#include <vector>

#include "runner/config.hpp"

namespace fdlab::runner {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  std::string theorem_case;  // the statement the checks exercise
  std::vector<Check> checks;
  std::string json;          // run.json content: echoed config, results, checks
  std::vector<std::string> artifacts;

  [[nodiscard]] bool passed() const;
};

/// Runs one experiment. With write_artifacts the CSV/JSON files go to
/// config.out_dir; otherwise only the checks are evaluated.
RunResult run_experiment(const ExperimentConfig& config, bool write_artifacts);

/// Throws AssertionFailure naming the theorem case and the first failed check.
void enforce(const RunResult& result);

}  // namespace fdlab::runner
