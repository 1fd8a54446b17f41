#include "aoi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "aoi/quadrature.hpp"

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void throw_unstable_processing(std::size_t j, double load) {
  std::ostringstream os;
  os << "processing queue unstable at class " << (j + 1) << ": cumulative load " << load
     << " reaches the stability limit 1";
  throw UnstableProcessing(os.str());
}

[[noreturn]] void throw_unstable_transmission(double load) {
  std::ostringstream os;
  os << "transmission queue unstable: load " << load << " reaches the stability limit 1";
  throw UnstableTransmission(os.str());
}

void check_sizes(const std::vector<double>& rates, const std::vector<double>& moments,
                 const char* what) {
  if (rates.size() != moments.size())
    throw std::invalid_argument(std::string("rate vector size does not match ") + what);
}

double half_second_moment_rate(const std::vector<double>& rates, const std::vector<double>& zp) {
  double s = 0.0;
  for (std::size_t k = 0; k < rates.size(); ++k) s += rates[k] * (zp[k] * zp[k]);
  return s * 0.5;
}

}  // namespace

double fading_service_mean(double xi, double snr) {
  if (xi == 0.0) return 0.0;
  if (!(xi > 0.0) || !(snr > 0.0) || !std::isfinite(xi) || !std::isfinite(snr))
    throw std::invalid_argument("fading_service_mean requires positive finite xi and snr");
  const double lo = std::log1p(snr * kFadingFloor);
  const double hi = std::log1p(snr * kFadingCap);
  const double scale = xi / snr;
  auto integrand = [scale, snr](double u) {
    return scale * std::exp(u - std::expm1(u) / snr) / u;
  };
  return integrate_adaptive(integrand, lo, hi).value;
}

std::vector<double> processing_moments(const SystemConfig& config) {
  std::vector<double> zp(config.size());
  for (std::size_t j = 0; j < config.size(); ++j)
    zp[j] = processing_time(config.sensors[j], config.processor);
  return zp;
}

ServiceMoments service_moments(const SystemConfig& config) {
  ServiceMoments m;
  const std::size_t n = config.size();
  m.processing = processing_moments(config);
  m.transmission.resize(n);
  const double snr = mean_snr(config.channel);
  for (std::size_t j = 0; j < n; ++j) {
    bool reused = false;
    for (std::size_t k = 0; k < j; ++k) {
      if (config.sensors[k].processed_mbits == config.sensors[j].processed_mbits) {
        m.transmission[j] = m.transmission[k];
        reused = true;
        break;
      }
    }
    if (!reused)
      m.transmission[j] = fading_service_mean(
          transmission_xi(config.channel, config.sensors[j].processed_mbits), snr);
  }
  return m;
}

PerClassLoads class_loads(const std::vector<double>& rates, const std::vector<double>& processing) {
  check_sizes(rates, processing, "the processing moments");
  PerClassLoads out;
  out.rho.resize(rates.size());
  for (std::size_t j = 0; j < rates.size(); ++j) {
    out.rho[j] = rates[j] * processing[j];
    out.busy_probability += out.rho[j];
  }
  return out;
}

double priority_wait(const std::vector<double>& rates, const std::vector<double>& processing,
                     std::size_t j) {
  check_sizes(rates, processing, "the processing moments");
  if (j >= rates.size()) throw std::out_of_range("sensor index out of range");
  const double num = half_second_moment_rate(rates, processing);
  double prefix = 0.0;
  for (std::size_t i = 0; i < j; ++i) prefix += rates[i] * processing[i];
  const double lower = 1.0 - prefix;
  prefix += rates[j] * processing[j];
  const double upper = 1.0 - prefix;
  if (upper <= kStabilityMargin) throw_unstable_processing(j, prefix);
  return num / (upper * lower);
}

PmeIntermediates pme_intermediates(const std::vector<double>& rates,
                                   const std::vector<double>& processing,
                                   const std::vector<double>& transmission) {
  check_sizes(rates, processing, "the processing moments");
  check_sizes(rates, transmission, "the transmission moments");
  const std::size_t n = rates.size();
  PmeIntermediates out;
  out.mu.assign(n, 1.0);
  out.h_profile.resize(n);

  double total_rate = 0.0;
  for (std::size_t j = 0; j < n; ++j) total_rate += rates[j];
  double rho_t = 0.0;
  for (std::size_t j = 0; j < n; ++j) rho_t += rates[j] * transmission[j];
  out.transmission_load = rho_t;

  const double num = half_second_moment_rate(rates, processing);
  std::vector<double> wp(n);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lower = 1.0 - prefix;
    prefix += rates[j] * processing[j];
    const double upper = 1.0 - prefix;
    if (upper <= kStabilityMargin) throw_unstable_processing(j, prefix);
    wp[j] = num / (upper * lower);
  }
  const double busy = prefix;
  if (1.0 - rho_t <= kStabilityMargin) throw_unstable_transmission(rho_t);

  for (std::size_t j = 0; j < n; ++j) {
    auto& row = out.h_profile[j];
    row.resize(j + 1);
    for (std::size_t i = 0; i < j; ++i) row[i] = rates[i] * (wp[i] + wp[j]);
    row[j] = rates[j] * wp[j];
  }

  if (rho_t <= 0.0 || total_rate <= 0.0) return out;  // empty system, ratios stay at 1
  out.aggregate_transmission_mean = rho_t / total_rate;

  const double agg = out.aggregate_transmission_mean;
  const double s0 = rates[0] * wp[0] * transmission[0];
  const double base = busy * agg + std::max(s0 - (wp[0] + processing[0]), 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += rates[i] * (wp[i] + wp[j]) * transmission[i];
    s += rates[j] * wp[j] * transmission[j];
    out.mu[j] = (busy * agg + std::max(s - (wp[j] + processing[j]), 0.0)) / base;
  }
  return out;
}

std::vector<double> transmission_waits(const std::vector<double>& rates,
                                       const std::vector<double>& processing,
                                       const std::vector<double>& transmission) {
  const PmeIntermediates pme = pme_intermediates(rates, processing, transmission);
  const std::size_t n = rates.size();
  std::vector<double> out(n, 0.0);
  if (pme.transmission_load <= 0.0) return out;
  double lm = 0.0;
  for (std::size_t j = 0; j < n; ++j) lm += rates[j] * pme.mu[j];
  const double rho_sq = pme.transmission_load * pme.transmission_load;
  const double denom = lm * (1.0 - pme.transmission_load);
  for (std::size_t j = 0; j < n; ++j) out[j] = pme.mu[j] * rho_sq / denom;
  return out;
}

std::vector<PaoiBreakdown> paoi_breakdowns(const std::vector<double>& rates,
                                           const std::vector<double>& processing,
                                           const std::vector<double>& transmission) {
  check_sizes(rates, processing, "the processing moments");
  check_sizes(rates, transmission, "the transmission moments");
  const std::size_t n = rates.size();
  const double num = half_second_moment_rate(rates, processing);
  std::vector<double> wp(n);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lower = 1.0 - prefix;
    prefix += rates[j] * processing[j];
    const double upper = 1.0 - prefix;
    if (upper <= kStabilityMargin) throw_unstable_processing(j, prefix);
    wp[j] = num / (upper * lower);
  }
  const std::vector<double> wt = transmission_waits(rates, processing, transmission);
  std::vector<PaoiBreakdown> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    PaoiBreakdown& b = out[j];
    b.inter_arrival = 1.0 / rates[j];
    b.processing_service = processing[j];
    b.processing_wait = wp[j];
    b.transmission_service = transmission[j];
    b.transmission_wait = wt[j];
    b.total = b.inter_arrival + b.processing_service + b.processing_wait +
              b.transmission_service + b.transmission_wait;
  }
  return out;
}

namespace {

void check_rates_for_config(const SystemConfig& config, const RateVector& rates) {
  if (rates.size() != config.size())
    throw ConfigError("rate vector size does not match the number of sensors");
  for (std::size_t j = 0; j < rates.size(); ++j)
    if (!(rates[j] > 0.0) || !std::isfinite(rates[j])) {
      std::ostringstream os;
      os << "rate for sensor " << (j + 1) << " must be positive, got " << rates[j];
      throw ConfigError(os.str());
    }
}

}  // namespace

double processing_wait(const SystemConfig& config, const RateVector& rates, std::size_t j) {
  check_rates_for_config(config, rates);
  return priority_wait(rates, processing_moments(config), j);
}

double transmission_time_expectation(const SystemConfig& config, std::size_t j) {
  if (j >= config.size()) throw std::out_of_range("sensor index out of range");
  return fading_service_mean(
      transmission_xi(config.channel, config.sensors[j].processed_mbits), mean_snr(config.channel));
}

double pme_wait(const SystemConfig& config, const RateVector& rates, std::size_t j) {
  check_rates_for_config(config, rates);
  if (j >= config.size()) throw std::out_of_range("sensor index out of range");
  const ServiceMoments m = service_moments(config);
  return transmission_waits(rates, m.processing, m.transmission)[j];
}

std::vector<PaoiBreakdown> average_paoi(const SystemConfig& config, const RateVector& rates) {
  check_rates_for_config(config, rates);
  const ServiceMoments m = service_moments(config);
  return paoi_breakdowns(rates, m.processing, m.transmission);
}

double objective_max_paoi(const SystemConfig& config, const RateVector& rates) {
  if (rates.size() != config.size())
    throw ConfigError("rate vector size does not match the number of sensors");
  for (std::size_t j = 0; j < rates.size(); ++j)
    if (!(rates[j] > 0.0) || !std::isfinite(rates[j])) return kInf;
  try {
    const auto breakdowns = average_paoi(config, rates);
    double worst = -kInf;
    for (const PaoiBreakdown& b : breakdowns)
      if (b.total > worst) worst = b.total;
    return worst;
  } catch (const UnstableProcessing&) {
    return kInf;
  } catch (const UnstableTransmission&) {
    return kInf;
  }
}

PaoiEvaluator::PaoiEvaluator(const SystemConfig& config) : moments_(service_moments(config)) {}

PaoiEvaluator::PaoiEvaluator(std::vector<double> processing, std::vector<double> transmission) {
  if (processing.size() != transmission.size())
    throw std::invalid_argument("service moment vectors must have equal size");
  moments_.processing = std::move(processing);
  moments_.transmission = std::move(transmission);
}

double PaoiEvaluator::objective(const double* rates, std::size_t n) {
  const auto& zp = moments_.processing;
  const auto& zt = moments_.transmission;
  if (n != zp.size()) throw std::invalid_argument("rate vector size does not match the system");
  for (std::size_t j = 0; j < n; ++j)
    if (!(rates[j] > 0.0) || !std::isfinite(rates[j])) return kInf;

  double num = 0.0;
  for (std::size_t k = 0; k < n; ++k) num += rates[k] * (zp[k] * zp[k]);
  num *= 0.5;
  double total_rate = 0.0;
  for (std::size_t j = 0; j < n; ++j) total_rate += rates[j];
  double rho_t = 0.0;
  for (std::size_t j = 0; j < n; ++j) rho_t += rates[j] * zt[j];
  if (1.0 - rho_t <= kStabilityMargin) return kInf;

  wp_.resize(n);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lower = 1.0 - prefix;
    prefix += rates[j] * zp[j];
    const double upper = 1.0 - prefix;
    if (upper <= kStabilityMargin) return kInf;
    wp_[j] = num / (upper * lower);
  }
  const double busy = prefix;
  const double agg = rho_t / total_rate;

  mu_.resize(n);
  const double s0 = rates[0] * wp_[0] * zt[0];
  const double base = busy * agg + std::max(s0 - (wp_[0] + zp[0]), 0.0);
  mu_[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += rates[i] * (wp_[i] + wp_[j]) * zt[i];
    s += rates[j] * wp_[j] * zt[j];
    mu_[j] = (busy * agg + std::max(s - (wp_[j] + zp[j]), 0.0)) / base;
  }
  double lm = 0.0;
  for (std::size_t j = 0; j < n; ++j) lm += rates[j] * mu_[j];
  const double rho_sq = rho_t * rho_t;
  const double denom = lm * (1.0 - rho_t);
  double worst = -kInf;
  for (std::size_t j = 0; j < n; ++j) {
    const double wt = mu_[j] * rho_sq / denom;
    const double total = 1.0 / rates[j] + zp[j] + wp_[j] + zt[j] + wt;
    if (total > worst) worst = total;
  }
  return worst;
}

}  // namespace aoi
