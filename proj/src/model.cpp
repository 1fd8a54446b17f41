#include "aoi/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace aoi {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::string sensor_field_msg(std::size_t j, const char* field, double v, const char* what) {
  std::ostringstream os;
  os << "sensor " << (j + 1) << ": " << field << " " << what << ", got " << v;
  return os.str();
}

}  // namespace

void validate(const SystemConfig& config) {
  require(!config.sensors.empty(), "config must define at least one sensor");
  for (std::size_t j = 0; j < config.sensors.size(); ++j) {
    const SensorConfig& s = config.sensors[j];
    require(std::isfinite(s.lambda) && s.lambda > 0.0,
            sensor_field_msg(j, "lambda", s.lambda, "must be positive"));
    require(std::isfinite(s.raw_mbits) && s.raw_mbits > 0.0,
            sensor_field_msg(j, "raw_mbits", s.raw_mbits, "must be positive"));
    require(std::isfinite(s.processed_mbits) && s.processed_mbits > 0.0,
            sensor_field_msg(j, "processed_mbits", s.processed_mbits, "must be positive"));
    require(std::isfinite(s.cycles_per_bit) && s.cycles_per_bit > 0.0,
            sensor_field_msg(j, "cycles_per_bit", s.cycles_per_bit, "must be positive"));
    if (s.processed_mbits >= s.raw_mbits) {
      std::ostringstream os;
      os << "sensor " << (j + 1) << ": processed_mbits " << s.processed_mbits
         << " must be smaller than raw_mbits " << s.raw_mbits;
      throw ConfigError(os.str());
    }
  }
  require(std::isfinite(config.processor.cpu_hz) && config.processor.cpu_hz > 0.0,
          "processor.cpu_hz must be positive");
  const ChannelConfig& c = config.channel;
  require(std::isfinite(c.power_mw) && c.power_mw > 0.0, "channel.power_mw must be positive");
  require(std::isfinite(c.bandwidth_hz) && c.bandwidth_hz > 0.0,
          "channel.bandwidth_hz must be positive");
  require(std::isfinite(c.distance_m) && c.distance_m > 0.0, "channel.distance_m must be positive");
  require(std::isfinite(c.alpha) && c.alpha > 0.0, "channel.alpha must be positive");
  require(std::isfinite(c.noise_dbm_hz), "channel.noise_dbm_hz must be finite");
}

double processing_time(const SensorConfig& s, const ProcessorConfig& p) {
  return (s.raw_mbits - s.processed_mbits) * 1e6 * s.cycles_per_bit / p.cpu_hz;
}

double noise_power_mw(const ChannelConfig& c) {
  return std::pow(10.0, (c.noise_dbm_hz + 10.0 * std::log10(c.bandwidth_hz)) / 10.0);
}

double mean_snr(const ChannelConfig& c) {
  return c.power_mw * std::pow(c.distance_m, -c.alpha) / noise_power_mw(c);
}

double transmission_xi(const ChannelConfig& c, double processed_mbits) {
  return processed_mbits * 1e6 * std::numbers::ln2 / c.bandwidth_hz;
}

}  // namespace aoi
