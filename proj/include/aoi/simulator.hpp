#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

struct Packet {
  int sensor_index = 0;  // 0-based class (lower index = higher priority)
  double arrival_time = 0.0;
  double processing_start = 0.0;
  double processing_end = 0.0;
  double transmission_start = 0.0;
  double departure_time = 0.0;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t packets_per_sensor = 100000;  // measured peak-age samples per sensor
  std::size_t warmup_packets = 1000;        // leading deliveries per sensor discarded
  bool record_packets = false;              // keep the full delivered-packet trail for audits
};

struct SimulationStats {
  std::vector<double> per_sensor_mean_paoi;
  std::vector<double> paoi_stderr;
  std::vector<double> mean_processing_wait;
  std::vector<double> mean_transmission_wait;
  std::vector<std::size_t> delivered_count;  // post-warmup deliveries per sensor
  bool saturated = false;                    // in-flight packet count exceeded the guard
  std::vector<Packet> packets;               // delivered order; filled when record_packets
};

inline constexpr std::size_t kMaxInFlight = 1000000;

// Event-driven simulation of the two-stage system: a non-preemptive
// priority queue with deterministic per-class service feeding a FCFS
// transmission queue with fading service times. Runs until every sensor has
// packets_per_sensor measured peak-age samples, or until saturation.
SimulationStats run_simulation(const SystemConfig& config, const RateVector& rates,
                               const SimConfig& sim);

}  // namespace aoi
