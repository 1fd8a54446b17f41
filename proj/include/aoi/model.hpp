#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace aoi {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SensorConfig {
  double lambda = 0.0;           // packets per second
  double raw_mbits = 0.0;        // size of the original packet
  double processed_mbits = 0.0;  // size after compression
  double cycles_per_bit = 0.0;   // processing cost
};

struct ProcessorConfig {
  double cpu_hz = 0.0;
};

struct ChannelConfig {
  double power_mw = 0.0;
  double bandwidth_hz = 0.0;
  double distance_m = 0.0;
  double alpha = 0.0;         // path loss exponent
  double noise_dbm_hz = 0.0;  // AWGN power density
};

struct SystemConfig {
  std::vector<SensorConfig> sensors;
  ProcessorConfig processor;
  ChannelConfig channel;

  std::size_t size() const { return sensors.size(); }
};

using RateVector = std::vector<double>;

void validate(const SystemConfig& config);

// deterministic per-packet processing time, seconds
double processing_time(const SensorConfig& s, const ProcessorConfig& p);

double noise_power_mw(const ChannelConfig& c);
double mean_snr(const ChannelConfig& c);

// time scale of the fading service law: xi = bits * ln2 / bandwidth
double transmission_xi(const ChannelConfig& c, double processed_mbits);

}  // namespace aoi
