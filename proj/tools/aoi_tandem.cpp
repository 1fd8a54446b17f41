#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "aoi/config_io.hpp"
#include "aoi/model.hpp"
#include "aoi/threads.hpp"
#include "aoi/workflows.hpp"

namespace {

struct ConfigSource {
  std::string config_path;
  std::string preset;
  std::size_t sensors = 10;
  double processed_mbits = 4.0;
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
  auto* config = cmd->add_option("--config", src.config_path, "JSON system description");
  auto* preset = cmd->add_option("--preset", src.preset, "built-in system: table2 or sec5c")
                     ->check(CLI::IsMember({"table2", "sec5c"}));
  cmd->add_option("--sensors", src.sensors, "sensor count for the sec5c preset")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--processed-mbits", src.processed_mbits,
                  "processed packet size for the sec5c preset")
      ->check(CLI::PositiveNumber);
  config->excludes(preset);
  preset->excludes(config);
}

aoi::SystemConfig resolve_config(const ConfigSource& src) {
  if (!src.config_path.empty()) return aoi::load_config(src.config_path);
  if (src.preset == "table2") return aoi::make_table2_preset();
  if (src.preset == "sec5c") return aoi::make_wide_preset(src.sensors, src.processed_mbits);
  throw aoi::ConfigError("either --config or --preset is required");
}

struct SweepSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 0;
};

SweepSpec parse_sweep(const std::string& text) {
  const auto p1 = text.find(':');
  const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  const auto p3 = text.find(':', p2 == std::string::npos ? p2 : p2 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos || p3 == std::string::npos)
    throw aoi::ConfigError("--sweep expects lambda_b:START:STOP:COUNT, got '" + text + "'");
  const std::string axis = text.substr(0, p1);
  if (axis != "lambda_b")
    throw aoi::ConfigError("--sweep axis must be lambda_b, got '" + axis + "'");
  SweepSpec spec;
  try {
    spec.start = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    spec.stop = std::stod(text.substr(p2 + 1, p3 - p2 - 1));
    const long long count = std::stoll(text.substr(p3 + 1));
    if (count < 0) throw std::invalid_argument("negative");
    spec.count = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw aoi::ConfigError("--sweep expects numeric START:STOP:COUNT, got '" + text + "'");
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  aoi::configure_threads();

  CLI::App app{"average peak-age analysis of a two-stage sensor pipeline"};
  app.require_subcommand(1);

  ConfigSource an_src, sim_src, val_src, opt_src;
  std::vector<double> an_rates, sim_rates, ppt_k = {1.1, 1.3, 1.5, 2.0};
  std::vector<std::uint64_t> val_seeds = {1}, opt_seeds = {1};
  std::string an_out, sim_out, val_out, opt_out, sweep_text;
  std::uint64_t sim_seed = 1;
  std::size_t sim_packets = 100000, sim_warmup = 1000;
  std::size_t val_packets = 100000, val_warmup = 1000;
  double phi_min = 1e-5;

  auto* analytic = app.add_subcommand("analytic", "closed-form average peak age per sensor");
  add_config_options(analytic, an_src);
  analytic->add_option("--rates", an_rates, "arrival rates overriding the config")
      ->delimiter(',');
  analytic->add_option("--out", an_out, "output CSV path")->required();

  auto* simulate = app.add_subcommand("simulate", "event-driven measurement of the same system");
  add_config_options(simulate, sim_src);
  simulate->add_option("--rates", sim_rates, "arrival rates overriding the config")
      ->delimiter(',');
  simulate->add_option("--seed", sim_seed, "random seed");
  simulate->add_option("--packets", sim_packets, "measured deliveries per sensor")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--warmup", sim_warmup, "leading deliveries per sensor to discard");
  simulate->add_option("--out", sim_out, "output CSV path")->required();

  auto* validate = app.add_subcommand("validate", "sweep a base rate, comparing model vs simulation");
  add_config_options(validate, val_src);
  validate->add_option("--sweep", sweep_text, "grid spec lambda_b:START:STOP:COUNT")->required();
  validate->add_option("--seeds", val_seeds, "simulation seeds")->delimiter(',');
  validate->add_option("--packets", val_packets, "measured deliveries per sensor")
      ->check(CLI::PositiveNumber);
  validate->add_option("--warmup", val_warmup, "leading deliveries per sensor to discard");
  validate->add_option("--out", val_out, "output CSV path")->required();

  auto* optimize = app.add_subcommand("optimize", "search rates minimizing the worst sensor age");
  add_config_options(optimize, opt_src);
  optimize->add_option("--seeds", opt_seeds, "search starting seeds")->delimiter(',');
  optimize->add_option("--ppt-k", ppt_k, "load divisors for the proportional baseline")
      ->delimiter(',');
  optimize->add_option("--phi-min", phi_min, "step scale at which the search stops");
  optimize->add_option("--out", opt_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analytic->parsed()) {
      aoi::AnalyticJob job;
      job.config = resolve_config(an_src);
      job.rates = an_rates;
      job.out_path = an_out;
      return aoi::cmd_analytic(job);
    }
    if (simulate->parsed()) {
      aoi::SimulateJob job;
      job.config = resolve_config(sim_src);
      job.rates = sim_rates;
      job.seed = sim_seed;
      job.packets = sim_packets;
      job.warmup = sim_warmup;
      job.out_path = sim_out;
      return aoi::cmd_simulate(job);
    }
    if (validate->parsed()) {
      aoi::ValidateJob job;
      job.config = resolve_config(val_src);
      const SweepSpec spec = parse_sweep(sweep_text);
      job.sweep_start = spec.start;
      job.sweep_stop = spec.stop;
      job.sweep_count = spec.count;
      job.seeds = val_seeds;
      job.packets = val_packets;
      job.warmup = val_warmup;
      job.out_path = val_out;
      return aoi::cmd_validate(job);
    }
    if (optimize->parsed()) {
      aoi::OptimizeJob job;
      job.config = resolve_config(opt_src);
      job.seeds = opt_seeds;
      job.ppt_k = ppt_k;
      job.phi_min = phi_min;
      job.out_dir = opt_out;
      return aoi::cmd_optimize(job);
    }
  } catch (const aoi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
