#include "aoi/workflows.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "aoi/analytic.hpp"
#include "aoi/csv.hpp"
#include "aoi/optimizer.hpp"
#include "aoi/simulator.hpp"

namespace aoi {

namespace {

RateVector effective_rates(const SystemConfig& config, const RateVector& override_rates) {
  if (!override_rates.empty()) return override_rates;
  RateVector rates;
  rates.reserve(config.size());
  for (const SensorConfig& s : config.sensors) rates.push_back(s.lambda);
  return rates;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
  return out;
}

std::vector<std::string> lambda_headers(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back("lambda_" + std::to_string(j + 1));
  return out;
}

void append(std::vector<std::string>& row, const std::vector<std::string>& tail) {
  row.insert(row.end(), tail.begin(), tail.end());
}

std::vector<std::string> lambda_fields(const RateVector& rates) {
  std::vector<std::string> out;
  for (double v : rates) out.push_back(csv::format_double(v));
  return out;
}

}  // namespace

int cmd_analytic(const AnalyticJob& job) {
  validate(job.config);
  const RateVector rates = effective_rates(job.config, job.rates);
  std::vector<PaoiBreakdown> rows;
  try {
    rows = average_paoi(job.config, rates);
  } catch (const UnstableProcessing& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const UnstableTransmission& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  }
  auto out = open_output(job.out_path);
  csv::Writer w(out);
  w.write_row({"sensor", "lambda", "inter_arrival", "processing_service", "processing_wait",
               "transmission_service", "transmission_wait", "total"});
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const PaoiBreakdown& b = rows[j];
    w.write_row({csv::format_unsigned(j + 1), csv::format_double(rates[j]),
                 csv::format_double(b.inter_arrival), csv::format_double(b.processing_service),
                 csv::format_double(b.processing_wait), csv::format_double(b.transmission_service),
                 csv::format_double(b.transmission_wait), csv::format_double(b.total)});
  }
  return 0;
}

int cmd_simulate(const SimulateJob& job) {
  validate(job.config);
  const RateVector rates = effective_rates(job.config, job.rates);
  SimConfig sim;
  sim.seed = job.seed;
  sim.packets_per_sensor = job.packets;
  sim.warmup_packets = job.warmup;
  const SimulationStats stats = run_simulation(job.config, rates, sim);
  if (stats.saturated)
    std::cerr << "warning: simulation saturated (queue kept growing); statistics are partial\n";
  auto out = open_output(job.out_path);
  csv::Writer w(out);
  w.write_row({"sensor", "lambda", "mean_paoi", "stderr", "mean_wp", "mean_wt", "delivered"});
  for (std::size_t j = 0; j < rates.size(); ++j) {
    w.write_row({csv::format_unsigned(j + 1), csv::format_double(rates[j]),
                 csv::format_double(stats.per_sensor_mean_paoi[j]),
                 csv::format_double(stats.paoi_stderr[j]),
                 csv::format_double(stats.mean_processing_wait[j]),
                 csv::format_double(stats.mean_transmission_wait[j]),
                 csv::format_unsigned(stats.delivered_count[j])});
  }
  return 0;
}

int cmd_validate(const ValidateJob& job) {
  validate(job.config);
  if (job.seeds.empty()) throw ConfigError("validate needs at least one seed");
  const std::size_t n = job.config.size();
  const ServiceMoments moments = service_moments(job.config);

  auto out = open_output(job.out_path);
  csv::Writer w(out);
  w.write_row({"lambda_b", "sensor", "lambda", "analytic_paoi", "sim_paoi", "sim_stderr",
               "rel_gap", "feasible"});

  for (std::size_t p = 0; p < job.sweep_count; ++p) {
    const double lambda_b =
        job.sweep_count == 1
            ? job.sweep_start
            : job.sweep_start + (job.sweep_stop - job.sweep_start) *
                                    (static_cast<double>(p) /
                                     static_cast<double>(job.sweep_count - 1));
    RateVector rates(n);
    for (std::size_t j = 0; j < n; ++j)
      rates[j] = static_cast<double>(n - j) * lambda_b;

    std::vector<PaoiBreakdown> analytic;
    bool feasible = true;
    try {
      analytic = paoi_breakdowns(rates, moments.processing, moments.transmission);
    } catch (const UnstableProcessing&) {
      feasible = false;
    } catch (const UnstableTransmission&) {
      feasible = false;
    }

    if (!feasible) {
      for (std::size_t j = 0; j < n; ++j)
        w.write_row({csv::format_double(lambda_b), csv::format_unsigned(j + 1),
                     csv::format_double(rates[j]), "inf", "", "", "", "0"});
      continue;
    }

    std::vector<std::vector<double>> seed_means(job.seeds.size());
    std::vector<std::vector<double>> seed_stderr(job.seeds.size());
    for (std::size_t s = 0; s < job.seeds.size(); ++s) {
      SimConfig sim;
      sim.seed = job.seeds[s];
      sim.packets_per_sensor = job.packets;
      sim.warmup_packets = job.warmup;
      const SimulationStats stats = run_simulation(job.config, rates, sim);
      if (stats.saturated)
        std::cerr << "warning: simulation saturated at lambda_b="
                  << csv::format_double(lambda_b) << " seed=" << job.seeds[s] << "\n";
      seed_means[s] = stats.per_sensor_mean_paoi;
      seed_stderr[s] = stats.paoi_stderr;
    }

    for (std::size_t j = 0; j < n; ++j) {
      double mean = 0.0;
      for (std::size_t s = 0; s < job.seeds.size(); ++s) mean += seed_means[s][j];
      mean /= static_cast<double>(job.seeds.size());
      double se;
      if (job.seeds.size() >= 2) {
        double ss = 0.0;
        for (std::size_t s = 0; s < job.seeds.size(); ++s) {
          const double d = seed_means[s][j] - mean;
          ss += d * d;
        }
        const double m = static_cast<double>(job.seeds.size());
        se = std::sqrt(ss / (m - 1.0) / m);
      } else {
        se = seed_stderr[0][j];
      }
      const double gap = (analytic[j].total - mean) / mean;
      w.write_row({csv::format_double(lambda_b), csv::format_unsigned(j + 1),
                   csv::format_double(rates[j]), csv::format_double(analytic[j].total),
                   csv::format_double(mean), csv::format_double(se), csv::format_double(gap),
                   "1"});
    }
  }
  return 0;
}

int cmd_optimize(const OptimizeJob& job) {
  validate(job.config);
  if (job.seeds.empty()) throw ConfigError("optimize needs at least one seed");
  if (job.ppt_k.empty()) throw ConfigError("optimize needs at least one load divisor k");
  std::filesystem::create_directories(job.out_dir);
  const std::size_t n = job.config.size();
  const std::vector<std::string> lambdas = lambda_headers(n);
  PaoiEvaluator evaluator(job.config);

  std::vector<GapResult> results;
  for (std::uint64_t seed : job.seeds) {
    GapOptions options;
    options.seed = seed;
    options.phi_min = job.phi_min;
    options.max_iterations = job.max_iterations;
    GapResult r = gap_optimize(job.config, options);

    const std::string trace_path =
        job.out_dir + "/gap_trace_seed" + std::to_string(seed) + ".csv";
    auto trace_out = open_output(trace_path);
    csv::Writer tw(trace_out);
    std::vector<std::string> head = {"iteration", "objective", "step", "n_binding", "accepted"};
    append(head, lambdas);
    tw.write_row(head);
    for (const GapIterate& it : r.trace.iterates) {
      std::vector<std::string> row = {csv::format_unsigned(it.iteration),
                                      csv::format_double(it.objective),
                                      csv::format_double(it.phi),
                                      csv::format_unsigned(it.n_binding),
                                      it.accepted ? "1" : "0"};
      append(row, lambda_fields(it.rates));
      tw.write_row(row);
    }
    results.push_back(std::move(r));
  }

  {
    auto out = open_output(job.out_dir + "/gap_results.csv");
    csv::Writer w(out);
    std::vector<std::string> head = {"seed", "iterations", "objective"};
    append(head, lambdas);
    w.write_row(head);
    for (std::size_t s = 0; s < job.seeds.size(); ++s) {
      std::vector<std::string> row = {csv::format_unsigned(job.seeds[s]),
                                      csv::format_unsigned(results[s].iterations),
                                      csv::format_double(results[s].objective)};
      append(row, lambda_fields(results[s].rates));
      w.write_row(row);
    }
  }

  double best_ppt = std::numeric_limits<double>::infinity();
  double best_k = job.ppt_k.front();
  {
    auto out = open_output(job.out_dir + "/ppt_results.csv");
    csv::Writer w(out);
    std::vector<std::string> head = {"k", "objective"};
    append(head, lambdas);
    w.write_row(head);
    for (double k : job.ppt_k) {
      const RateVector rates = ppt_baseline(evaluator.moments().processing,
                                            evaluator.moments().transmission, k);
      const double obj = evaluator.objective(rates);
      if (obj < best_ppt) {
        best_ppt = obj;
        best_k = k;
      }
      std::vector<std::string> row = {csv::format_double(k), csv::format_double(obj)};
      append(row, lambda_fields(rates));
      w.write_row(row);
    }
  }

  {
    double mean = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const GapResult& r : results) {
      mean += r.objective;
      lo = std::min(lo, r.objective);
      hi = std::max(hi, r.objective);
    }
    mean /= static_cast<double>(results.size());
    const double improvement = (best_ppt - mean) / best_ppt * 100.0;
    auto out = open_output(job.out_dir + "/report.csv");
    csv::Writer w(out);
    w.write_row({"gap_mean", "gap_min", "gap_max", "best_ppt_k", "best_ppt_objective",
                 "improvement_percent"});
    w.write_row({csv::format_double(mean), csv::format_double(lo), csv::format_double(hi),
                 csv::format_double(best_k), csv::format_double(best_ppt),
                 csv::format_double(improvement)});
  }
  return 0;
}

}  // namespace aoi
