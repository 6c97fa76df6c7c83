#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcloss/family.hpp"
#include "mcloss/report.hpp"

namespace mcloss {

struct SuiteConfig {
  std::string suite;
  std::size_t m = 3;
  double beta = 0.5;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  // Mesh density override; 0 keeps each suite's default.
  std::size_t density = 0;
  Execution exec = Execution::Parallel;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Runs one named suite. Unknown names raise ConfigurationError.
std::vector<BoundReport> run_suite(const SuiteConfig& cfg);

// Scoring families available at m: the two-class rules only for m = 2.
std::vector<LossFamily> scoring_families(std::size_t m);
// The ordinal cost matrix c_jk = |j - k|.
CostMatrix ordinal_cost(std::size_t m);

}  // namespace mcloss
