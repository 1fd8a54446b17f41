// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Tolerances are pinned here on purpose; loosening them is a spec change.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/config_io.hpp"
#include "aoi/csv.hpp"
#include "aoi/mc.hpp"
#include "aoi/model.hpp"
#include "aoi/optimizer.hpp"
#include "aoi/rng.hpp"
#include "aoi/simulator.hpp"
#include "aoi/threads.hpp"
#include "aoi/workflows.hpp"

namespace {

bool g_all_ok = true;

void detail(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  std::printf("    ");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
}

template <class Fn>
void run_criterion(const char* id, const char* name, Fn fn) {
  std::printf("%s %s\n", id, name);
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    detail("unexpected exception: %s", e.what());
    ok = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %s %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name, secs);
  if (!ok) g_all_ok = false;
}

double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

aoi::SystemConfig single_md1_config() {
  aoi::SystemConfig c;
  c.sensors = {{0.5, 2.0, 1.0, 1.0}};
  c.processor = {1e6};
  c.channel = {1e6, 1e9, 1.0, 3.0, -174.0};
  return c;
}

// ---------------------------------------------------------------------------
// C1: single-sensor deterministic-service wait oracle

bool criterion_1() {
  auto config = single_md1_config();
  aoi::RateVector rates = {0.5};

  auto moments = aoi::service_moments(config);
  detail("processing service %.6f s, transmission service %.3e s (negligible)",
         moments.processing[0], moments.transmission[0]);

  double wp = aoi::processing_wait(config, rates, 0);
  double closed_form = 0.5 * 1.0 / (2.0 * (1.0 - 0.5));
  bool analytic_ok = rel_err(wp, closed_form) <= 1e-10;
  detail("analytic wait %.12f vs closed form %.12f (rel %.2e) %s", wp, closed_form,
         rel_err(wp, closed_form), analytic_ok ? "ok" : "VIOLATION");

  aoi::SimConfig sim;
  sim.seed = 101;
  sim.packets_per_sensor = 1000000;
  sim.warmup_packets = 1000;
  auto stats = aoi::run_simulation(config, rates, sim);
  double sim_wp = stats.mean_processing_wait[0];
  bool sim_ok = !stats.saturated && rel_err(sim_wp, closed_form) <= 0.02;
  detail("simulated wait %.6f over %zu packets (rel %.3f%%) %s", sim_wp,
         stats.delivered_count[0], 100.0 * rel_err(sim_wp, closed_form),
         sim_ok ? "ok" : "VIOLATION");

  return analytic_ok && sim_ok;
}

// ---------------------------------------------------------------------------
// C2: fading service mean, quadrature vs Monte Carlo

bool criterion_2() {
  auto config = aoi::make_table2_preset();
  double snr = aoi::mean_snr(config.channel);
  bool ok = true;
  for (std::size_t j = 0; j < config.size(); ++j) {
    double xi = aoi::transmission_xi(config.channel, config.sensors[j].processed_mbits);
    double quad = aoi::fading_service_mean(xi, snr);
    auto mc = aoi::mc_transmission_mean(xi, snr, 10000000, 201 + j);
    double z = std::abs(quad - mc.mean) / mc.std_error;
    bool class_ok = z <= 3.0;
    detail("class %zu: quadrature %.9f, mc %.9f +- %.2e (%.2f se) %s", j + 1, quad, mc.mean,
           mc.std_error, z, class_ok ? "ok" : "VIOLATION");
    ok = ok && class_ok;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// C3: analytic vs simulated peak age across the load sweep

bool criterion_3() {
  auto config = aoi::make_table2_preset();
  const std::size_t n = config.size();
  bool within_band = true;
  bool ordered = true;
  double worst_gap = 0.0;

  for (int p = 0; p < 6; ++p) {
    double lb = 0.02 + 0.02 * p;
    aoi::RateVector rates(n);
    for (std::size_t j = 0; j < n; ++j) rates[j] = static_cast<double>(n - j) * lb;

    auto breakdown = aoi::average_paoi(config, rates);
    aoi::SimConfig sim;
    sim.seed = 301 + static_cast<std::uint64_t>(p);
    sim.packets_per_sensor = 100000;
    sim.warmup_packets = 1000;
    auto stats = aoi::run_simulation(config, rates, sim);

    for (std::size_t j = 0; j < n; ++j) {
      double a = breakdown[j].total;
      double s = stats.per_sensor_mean_paoi[j];
      double gap = std::abs(a - s) / s;
      worst_gap = std::max(worst_gap, gap);
      if (gap > 0.10) within_band = false;
      detail("lb %.2f sensor %zu: analytic %9.4f sim %9.4f gap %6.2f%%%s", lb, j + 1, a, s,
             100.0 * gap, gap > 0.10 ? "  > 10%" : "");
      if (j > 0 && !(breakdown[j].total > breakdown[j - 1].total &&
                     stats.per_sensor_mean_paoi[j] > stats.per_sensor_mean_paoi[j - 1]))
        ordered = false;
    }
  }
  detail("worst relative gap %.2f%% (band 10%%): %s", 100.0 * worst_gap,
         within_band ? "ok" : "VIOLATION");
  detail("peak age increases with sensor index everywhere: %s", ordered ? "ok" : "VIOLATION");

  auto ratio_at = [&](double lb) {
    aoi::RateVector rates(n);
    for (std::size_t j = 0; j < n; ++j) rates[j] = static_cast<double>(n - j) * lb;
    auto b = aoi::average_paoi(config, rates);
    return b[n - 1].total / b[0].total;
  };
  double r12 = ratio_at(0.12);
  double r13 = ratio_at(0.13);
  bool ratio_ok = r13 >= 5.0;
  detail("analytic spread A3/A1: %.3f at lb=0.12, %.3f at lb=0.13 (need >= 5 at 0.13) %s", r12,
         r13, ratio_ok ? "ok" : "VIOLATION");

  return within_band && ordered && ratio_ok;
}

// ---------------------------------------------------------------------------
// C4: analytic upper-bounds simulation when transmission dominates

bool criterion_4() {
  auto config = aoi::make_table2_preset();
  config.processor.cpu_hz = 2.5e9;
  const std::size_t n = config.size();
  bool ok = true;
  const double points[] = {0.14, 0.17};
  for (int p = 0; p < 2; ++p) {
    double lb = points[p];
    aoi::RateVector rates(n);
    for (std::size_t j = 0; j < n; ++j) rates[j] = static_cast<double>(n - j) * lb;
    auto breakdown = aoi::average_paoi(config, rates);
    aoi::SimConfig sim;
    sim.seed = 401 + static_cast<std::uint64_t>(p);
    sim.packets_per_sensor = 100000;
    sim.warmup_packets = 1000;
    auto stats = aoi::run_simulation(config, rates, sim);
    for (std::size_t j = 0; j < n; ++j) {
      double a = breakdown[j].total;
      double s = stats.per_sensor_mean_paoi[j];
      bool above = a >= s;
      detail("lb %.2f sensor %zu: analytic %9.4f sim %9.4f%s", lb, j + 1, a, s,
             above ? "" : "  BELOW simulation");
      ok = ok && above;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// C5: tangent cone generators obey polarity and give feasible steps

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

bool criterion_5() {
  aoi::rng::Stream stream(555, 7);
  std::size_t polarity_violations = 0;
  std::size_t infeasible_steps = 0;
  std::size_t generators_seen = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(stream.next_bits() % 9);
    std::vector<double> zp(n), zt(n);
    for (auto& v : zp) v = 0.1 + 2.9 * stream.next_u01();
    for (auto& v : zt) v = 0.1 + 2.9 * stream.next_u01();
    auto cs = aoi::build_constraints(zp, zt);
    auto x = aoi::sample_feasible_point(zp, zt, stream);
    double eps = aoi::initial_step(zp, zt) * std::exp2(-16.0 * stream.next_u01());
    auto binding = aoi::binding_set(cs, x, eps);
    auto basis = aoi::tangent_generators(cs, binding);

    for (const auto& s : basis.tangent_generators) {
      ++generators_seen;
      double sn = norm(s);
      for (auto l : binding)
        if (dot(s, cs.z_matrix[l]) > 1e-10 * sn * cs.row_norms[l]) ++polarity_violations;
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + eps * s[i] / sn;
      for (std::size_t l = 0; l < cs.z_matrix.size(); ++l)
        if (dot(cs.z_matrix[l], y) >= cs.b_vector[l] + 1e-9) ++infeasible_steps;
    }
  }
  detail("1000 random instances, %zu generators: %zu polarity violations, %zu infeasible steps",
         generators_seen, polarity_violations, infeasible_steps);
  bool sweep_ok = polarity_violations == 0 && infeasible_steps == 0;

  // interior point: no binding rows, search set must be the full +-e basis
  auto table2 = aoi::make_table2_preset();
  auto cs = aoi::build_constraints(table2);
  aoi::RateVector interior = {6e-4, 4e-4, 2e-4};
  auto binding = aoi::binding_set(cs, interior, 1e-6);
  auto basis = aoi::tangent_generators(cs, binding);
  bool interior_ok = binding.empty() && basis.tangent_generators.size() == 6;
  for (std::size_t d = 0; d < basis.tangent_generators.size() && interior_ok; ++d) {
    const auto& s = basis.tangent_generators[d];
    std::size_t axis = d % 3;
    double sign = d < 3 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != (i == axis ? sign : 0.0)) interior_ok = false;
  }
  detail("interior point: %zu binding rows, %zu generators (want 0 and 6) %s", binding.size(),
         basis.tangent_generators.size(), interior_ok ? "ok" : "VIOLATION");

  // binding normals that positively span the plane leave no feasible direction
  auto corner_cs = aoi::build_constraints({100.0, 100.0}, {0.5, 0.5});
  aoi::RateVector near_corner = {1e-4, 1e-4};
  auto corner_binding = aoi::binding_set(corner_cs, near_corner, 0.01);
  auto corner_basis = aoi::tangent_generators(corner_cs, corner_binding);
  bool corner_ok = corner_binding.size() == 3 && corner_basis.normal_generators.size() == 3 &&
                   corner_basis.tangent_generators.empty();
  detail("spanning corner: %zu binding rows, %zu generators (want 3 and 0) %s",
         corner_binding.size(), corner_basis.tangent_generators.size(),
         corner_ok ? "ok" : "VIOLATION");

  return sweep_ok && interior_ok && corner_ok;
}

// ---------------------------------------------------------------------------
// C6: optimizer final objective matches exhaustive grid search

bool criterion_6() {
  bool ok = true;

  {
    aoi::SystemConfig config;
    config.sensors = {{0.1, 10.0, 2.0, 100.0}};
    config.processor = {5e8};
    config.channel = {100.0, 1e5, 300.0, 3.0, -174.0};
    aoi::PaoiEvaluator evaluator(config);
    double ub = 1.0 / std::max(evaluator.moments().processing[0],
                               evaluator.moments().transmission[0]);
    const int kGrid = 10000;
    double best = std::numeric_limits<double>::infinity();
    double best_rate = 0.0;
    for (int i = 0; i < kGrid; ++i) {
      double rate = ub * (i + 1) / (kGrid + 1.0);
      double f = evaluator.objective(&rate, 1);
      if (f < best) {
        best = f;
        best_rate = rate;
      }
    }
    aoi::GapOptions options;
    options.seed = 1;
    auto result = aoi::gap_optimize(config, options);
    double gap = (result.objective - best) / best;
    bool j1_ok = std::abs(gap) <= 0.01;
    detail("J=1: grid min %.6f at rate %.6f; optimizer %.6f at rate %.6f (gap %.3f%%) %s", best,
           best_rate, result.objective, result.rates[0], 100.0 * gap, j1_ok ? "ok" : "VIOLATION");
    ok = ok && j1_ok;
  }

  {
    auto config = aoi::make_wide_preset(2, 4.0);
    aoi::PaoiEvaluator evaluator(config);
    const auto& m = evaluator.moments();
    double ub1 = 1.0 / std::max(m.processing[0], m.transmission[0]);
    double ub2 = 1.0 / std::max(m.processing[1], m.transmission[1]);
    const int kGrid = 10000;
    double best = std::numeric_limits<double>::infinity();
    double best1 = 0.0, best2 = 0.0;
    double rates[2];
    for (int i = 0; i < kGrid; ++i) {
      rates[0] = ub1 * (i + 1) / (kGrid + 1.0);
      for (int k = 0; k < kGrid; ++k) {
        rates[1] = ub2 * (k + 1) / (kGrid + 1.0);
        double f = evaluator.objective(rates, 2);
        if (f < best) {
          best = f;
          best1 = rates[0];
          best2 = rates[1];
        }
      }
    }
    aoi::GapOptions options;
    options.seed = 1;
    auto result = aoi::gap_optimize(config, options);
    double gap = (result.objective - best) / best;
    bool j2_ok = std::abs(gap) <= 0.01;
    detail("J=2: grid min %.6f at (%.5f, %.5f); optimizer %.6f at (%.5f, %.5f) (gap %.3f%%) %s",
           best, best1, best2, result.objective, result.rates[0], result.rates[1], 100.0 * gap,
           j2_ok ? "ok" : "VIOLATION");
    ok = ok && j2_ok;
  }

  return ok;
}

// ---------------------------------------------------------------------------
// C7: optimizer convergence scale on the wide presets

struct Ensemble {
  std::vector<aoi::GapResult> results;
  bool valid = false;
};

Ensemble g_wide10;

Ensemble run_ensemble(const aoi::SystemConfig& config) {
  Ensemble e;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    aoi::GapOptions options;
    options.seed = seed;
    options.phi_min = 1e-5;
    e.results.push_back(aoi::gap_optimize(config, options));
  }
  e.valid = true;
  return e;
}

bool check_ensemble(const Ensemble& e, double med_lo, double med_hi, const char* label) {
  std::vector<double> iters;
  bool converged = true;
  bool monotone = true;
  for (const auto& r : e.results) {
    iters.push_back(static_cast<double>(r.iterations));
    if (r.hit_iteration_cap || !(r.final_phi < 1e-5)) converged = false;
    for (std::size_t i = 1; i < r.trace.iterates.size(); ++i)
      if (r.trace.iterates[i].objective > r.trace.iterates[i - 1].objective) monotone = false;
  }
  std::sort(iters.begin(), iters.end());
  double median = 0.5 * (iters[9] + iters[10]);
  bool med_ok = median >= med_lo && median <= med_hi;
  detail("%s: median iterations %.1f (window [%.0f, %.0f]), range [%.0f, %.0f] %s", label, median,
         med_lo, med_hi, iters.front(), iters.back(), med_ok ? "ok" : "VIOLATION");
  detail("%s: all runs converged below phi_min: %s; traces non-increasing: %s", label,
         converged ? "yes" : "NO", monotone ? "yes" : "NO");
  return med_ok && converged && monotone;
}

bool criterion_7() {
  auto wide6 = run_ensemble(aoi::make_wide_preset(6, 4.0));
  bool ok6 = check_ensemble(wide6, 45.0, 180.0, "J=6");
  g_wide10 = run_ensemble(aoi::make_wide_preset(10, 4.0));
  bool ok10 = check_ensemble(g_wide10, 70.0, 280.0, "J=10");
  return ok6 && ok10;
}

// ---------------------------------------------------------------------------
// C8: optimizer improvement over the proportional baseline

bool criterion_8() {
  auto config = aoi::make_wide_preset(10, 4.0);
  if (!g_wide10.valid) g_wide10 = run_ensemble(config);

  double mean_gap = 0.0;
  for (const auto& r : g_wide10.results) mean_gap += r.objective;
  mean_gap /= static_cast<double>(g_wide10.results.size());

  aoi::PaoiEvaluator evaluator(config);
  const double ks[] = {1.1, 1.3, 1.5, 2.0};
  double ppt_min = std::numeric_limits<double>::infinity();
  double ppt_max = 0.0;
  double k_min = 0.0, k_max = 0.0;
  for (double k : ks) {
    auto rates = aoi::ppt_baseline(config, k);
    double f = evaluator.objective(rates);
    detail("PPT k=%.1f: objective %.4f", k, f);
    if (f < ppt_min) {
      ppt_min = f;
      k_min = k;
    }
    if (f > ppt_max) {
      ppt_max = f;
      k_max = k;
    }
  }

  double vs_max = 100.0 * (ppt_max - mean_gap) / ppt_max;
  double vs_min = 100.0 * (ppt_min - mean_gap) / ppt_min;
  bool ok = vs_max >= 30.0;
  detail("mean optimizer objective %.4f over %zu seeds", mean_gap, g_wide10.results.size());
  detail("improvement vs worst PPT on the k grid (k=%.1f): %.2f%% (need >= 30%%) %s", k_max,
         vs_max, ok ? "ok" : "VIOLATION");
  detail("improvement vs best PPT on the k grid (k=%.1f): %.2f%%", k_min, vs_min);
  return ok;
}

// ---------------------------------------------------------------------------
// C9: bitwise determinism of workflows and the parallel kernel

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_9() {
  namespace fs = std::filesystem;
  auto config = aoi::make_table2_preset();
  fs::path root = fs::temp_directory_path() / "aoi_acceptance_runs";
  fs::remove_all(root);
  fs::create_directories(root / "a");
  fs::create_directories(root / "b");
  bool ok = true;

  auto compare = [&](const char* what, const fs::path& lhs, const fs::path& rhs) {
    bool same = slurp(lhs) == slurp(rhs) && fs::file_size(lhs) > 0;
    detail("%s: %s", what, same ? "bit-identical" : "MISMATCH");
    ok = ok && same;
  };

  for (const char* side : {"a", "b"}) {
    fs::path dir = root / side;
    aoi::AnalyticJob aj{config, {}, (dir / "analytic.csv").string()};
    aoi::cmd_analytic(aj);
    aoi::SimulateJob sj{config, {}, 11, 20000, 500, (dir / "simulate.csv").string()};
    aoi::cmd_simulate(sj);
    aoi::ValidateJob vj{config, 0.05, 0.11, 3, {1, 2}, 20000, 500, (dir / "validate.csv").string()};
    aoi::cmd_validate(vj);
    aoi::OptimizeJob oj{config, {1, 2}, {1.1, 1.3, 1.5, 2.0}, 1e-4, 100000,
                        (dir / "optimize").string()};
    aoi::cmd_optimize(oj);
  }

  compare("analytic workflow", root / "a/analytic.csv", root / "b/analytic.csv");
  compare("simulate workflow", root / "a/simulate.csv", root / "b/simulate.csv");
  compare("validate workflow", root / "a/validate.csv", root / "b/validate.csv");
  for (const char* f : {"gap_trace_seed1.csv", "gap_trace_seed2.csv", "gap_results.csv",
                        "ppt_results.csv", "report.csv"})
    compare(f, root / "a/optimize" / f, root / "b/optimize" / f);

  double xi = aoi::transmission_xi(config.channel, config.sensors[0].processed_mbits);
  double snr = aoi::mean_snr(config.channel);
  int original = aoi::max_threads();
  std::vector<std::string> renders;
  for (int t : {1, 2, 4}) {
    omp_set_num_threads(t);
    auto est = aoi::mc_transmission_mean(xi, snr, 1000001, 2024);
    renders.push_back(aoi::csv::format_double(est.mean) + "," +
                      aoi::csv::format_double(est.std_error));
  }
  omp_set_num_threads(original);
  bool threads_ok = renders[0] == renders[1] && renders[1] == renders[2];
  detail("parallel kernel across 1/2/4 threads: %s (%s)",
         threads_ok ? "bit-identical" : "MISMATCH", renders[0].c_str());
  ok = ok && threads_ok;

  fs::remove_all(root);
  return ok;
}

}  // namespace

int main() {
  aoi::configure_threads();
  std::printf("acceptance gate: peak-age analysis, simulation, and optimization\n\n");

  run_criterion("C1", "single-sensor deterministic-service wait oracle", criterion_1);
  run_criterion("C2", "fading service mean: quadrature vs Monte Carlo", criterion_2);
  run_criterion("C3", "analytic vs simulated peak age across the load sweep", criterion_3);
  run_criterion("C4", "analytic upper-bounds simulation under heavy transmission load",
                criterion_4);
  run_criterion("C5", "tangent cone generators: polarity and feasible steps", criterion_5);
  run_criterion("C6", "optimizer matches exhaustive grid search", criterion_6);
  run_criterion("C7", "optimizer convergence scale", criterion_7);
  run_criterion("C8", "optimizer improvement over the proportional baseline", criterion_8);
  run_criterion("C9", "bitwise determinism of workflows and the parallel kernel", criterion_9);

  std::printf("\n%s\n", g_all_ok ? "acceptance: all criteria passed"
                                 : "acceptance: at least one criterion failed");
  return g_all_ok ? 0 : 1;
}
