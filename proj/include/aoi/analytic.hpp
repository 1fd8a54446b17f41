#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

struct UnstableProcessing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnstableTransmission : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a stage counts as stable only while its load stays below 1 by this margin
inline constexpr double kStabilityMargin = 1e-9;

// The fading service law xi / ln(1 + snr * h), h ~ Exp(1), has an infinite
// mean when gains arbitrarily close to zero are admitted: the expectation
// integral diverges logarithmically at the h -> 0 end. The law is therefore
// truncated to h in [kFadingFloor, kFadingCap]. The cap removes probability
// mass ~exp(-46) ~ 1e-20; the floor turns events of probability ~1e-12 into a
// point mass at the floor. The simulator samples the same truncated law.
inline constexpr double kFadingFloor = 1e-12;
inline constexpr double kFadingCap = 46.0;

struct PerClassLoads {
  std::vector<double> rho;         // per-class processing load
  double busy_probability = 0.0;   // their sum
};

struct PaoiBreakdown {
  double inter_arrival = 0.0;
  double processing_service = 0.0;
  double processing_wait = 0.0;
  double transmission_service = 0.0;
  double transmission_wait = 0.0;
  double total = 0.0;
};

struct PmeIntermediates {
  std::vector<double> mu;                        // waiting-time ratios, mu[0] = 1
  std::vector<std::vector<double>> h_profile;    // row j holds the expected counts H_{j,1..j}
  double aggregate_transmission_mean = 0.0;      // arrival-share weighted mean service time
  double transmission_load = 0.0;
};

struct ServiceMoments {
  std::vector<double> processing;
  std::vector<double> transmission;
};

// expectation of the truncated fading service law, by adaptive quadrature on
// the substituted axis u = xi / t (equivalently u = ln(1 + snr * h))
double fading_service_mean(double xi, double snr);

ServiceMoments service_moments(const SystemConfig& config);
std::vector<double> processing_moments(const SystemConfig& config);

PerClassLoads class_loads(const std::vector<double>& rates, const std::vector<double>& processing);

// non-preemptive priority waiting time in the processing queue, class j (0-based)
double priority_wait(const std::vector<double>& rates, const std::vector<double>& processing,
                     std::size_t j);

PmeIntermediates pme_intermediates(const std::vector<double>& rates,
                                   const std::vector<double>& processing,
                                   const std::vector<double>& transmission);

std::vector<double> transmission_waits(const std::vector<double>& rates,
                                       const std::vector<double>& processing,
                                       const std::vector<double>& transmission);

std::vector<PaoiBreakdown> paoi_breakdowns(const std::vector<double>& rates,
                                           const std::vector<double>& processing,
                                           const std::vector<double>& transmission);

double processing_wait(const SystemConfig& config, const RateVector& rates, std::size_t j);
double transmission_time_expectation(const SystemConfig& config, std::size_t j);
double pme_wait(const SystemConfig& config, const RateVector& rates, std::size_t j);
std::vector<PaoiBreakdown> average_paoi(const SystemConfig& config, const RateVector& rates);

// max over sensors of the average peak age; +inf sentinel on any rate <= 0 or
// stage instability, so the optimizer can compare points without exceptions
double objective_max_paoi(const SystemConfig& config, const RateVector& rates);

// Repeated objective evaluation against fixed service moments (the hot path
// of the optimizer and of grid searches). objective() reuses internal scratch
// buffers and is not reentrant; give each thread its own copy.
class PaoiEvaluator {
 public:
  explicit PaoiEvaluator(const SystemConfig& config);
  PaoiEvaluator(std::vector<double> processing, std::vector<double> transmission);

  std::size_t sensors() const { return moments_.processing.size(); }
  const ServiceMoments& moments() const { return moments_; }

  double objective(const double* rates, std::size_t n);
  double objective(const std::vector<double>& rates) {
    return objective(rates.data(), rates.size());
  }

 private:
  ServiceMoments moments_;
  std::vector<double> wp_, mu_;
};

}  // namespace aoi
