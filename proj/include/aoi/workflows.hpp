#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

struct AnalyticJob {
  SystemConfig config;
  RateVector rates;  // empty: use the rates stored in the config
  std::string out_path;
};

struct SimulateJob {
  SystemConfig config;
  RateVector rates;  // empty: use the rates stored in the config
  std::uint64_t seed = 1;
  std::size_t packets = 100000;
  std::size_t warmup = 1000;
  std::string out_path;
};

struct ValidateJob {
  SystemConfig config;
  double sweep_start = 0.0;  // base rate lambda_b; sensor j of J gets (J - j + 1) * lambda_b
  double sweep_stop = 0.0;
  std::size_t sweep_count = 0;
  std::vector<std::uint64_t> seeds = {1};
  std::size_t packets = 100000;
  std::size_t warmup = 1000;
  std::string out_path;
};

struct OptimizeJob {
  SystemConfig config;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> ppt_k = {1.1, 1.3, 1.5, 2.0};
  double phi_min = 1e-5;
  std::size_t max_iterations = 100000;
  std::string out_dir;
};

// Each command returns a process exit status: 0 on success, 2 when the
// requested operating point is infeasible. Configuration errors propagate as
// ConfigError.
int cmd_analytic(const AnalyticJob& job);
int cmd_simulate(const SimulateJob& job);
int cmd_validate(const ValidateJob& job);
int cmd_optimize(const OptimizeJob& job);

}  // namespace aoi
