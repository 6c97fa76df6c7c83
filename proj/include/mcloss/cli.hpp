#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcloss/parallel.hpp"

namespace mcloss {

struct RunConfig {
  std::string command;
  std::string suite;
  std::size_t m = 3;
  double beta = 0.5;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  // 0 keeps each command's default; an explicit 0 is rejected by sweep.
  std::optional<std::size_t> density;
  double t_step = 0.01;
  std::string out = ".";
  std::string kind;
  nlohmann::json family;
  std::string data;
  std::string test_data;
  std::string model;
  std::string map;
  std::size_t n_train = 600;
  std::size_t n_test = 3000;
  std::size_t dim = 2;
  double separation = 8.0;
  std::size_t steps = 1500;
  double step_size = 1.0;
  double ridge = 0.0;
  double init_scale = 0.0;
  Execution exec = Execution::Parallel;
};

// Applies a JSON object to a config; unknown keys raise ConfigurationError.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

// Exit codes: 0 when every check passes, 1 on a failed check or training
// failure, 2 on usage and configuration errors.
int run_command(const RunConfig& cfg);
int run_cli(int argc, const char* const* argv);
// args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace mcloss
