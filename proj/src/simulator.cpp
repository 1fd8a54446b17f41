#include "aoi/simulator.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "aoi/analytic.hpp"
#include "aoi/mc.hpp"
#include "aoi/rng.hpp"

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SensorAccounting {
  std::size_t delivered = 0;       // total deliveries, including warmup
  std::size_t measured = 0;        // peak-age samples taken
  double last_arrival = kInf;      // arrival time of the previous delivered packet
  double paoi_mean = 0.0;          // Welford accumulators
  double paoi_m2 = 0.0;
  double wp_sum = 0.0;
  double wt_sum = 0.0;
  std::size_t window_count = 0;    // post-warmup deliveries
};

}  // namespace

SimulationStats run_simulation(const SystemConfig& config, const RateVector& rates,
                               const SimConfig& sim) {
  validate(config);
  const std::size_t n = config.size();
  if (rates.size() != n)
    throw ConfigError("rate vector size does not match the number of sensors");
  for (std::size_t j = 0; j < n; ++j)
    if (!(rates[j] > 0.0) || !std::isfinite(rates[j])) {
      std::ostringstream os;
      os << "simulation requires a positive arrival rate for sensor " << (j + 1) << ", got "
         << rates[j];
      throw ConfigError(os.str());
    }
  if (sim.packets_per_sensor == 0)
    throw ConfigError("packets_per_sensor must be at least 1");

  std::vector<double> zp(n), xi(n);
  for (std::size_t j = 0; j < n; ++j) {
    zp[j] = processing_time(config.sensors[j], config.processor);
    xi[j] = transmission_xi(config.channel, config.sensors[j].processed_mbits);
  }
  const double snr = mean_snr(config.channel);

  rng::Stream fading(sim.seed, rng::kFadingStream);
  std::vector<rng::Stream> arrivals;
  arrivals.reserve(n);
  std::vector<double> next_arrival(n);
  for (std::size_t j = 0; j < n; ++j) {
    arrivals.emplace_back(sim.seed, rng::kArrivalStreamBase + j);
    next_arrival[j] = arrivals[j].next_exponential(rates[j]);
  }

  std::vector<std::deque<Packet>> stage1(n);  // per-class FIFO
  std::deque<Packet> stage2;                  // FCFS by processing completion
  bool proc_busy = false, tx_busy = false;
  Packet in_proc{}, in_tx{};
  double proc_end = kInf, tx_end = kInf;
  std::size_t in_flight = 0;

  std::vector<SensorAccounting> acct(n);
  std::size_t sensors_done = 0;
  SimulationStats stats;

  auto start_transmission = [&](Packet p, double now) {
    p.transmission_start = now;
    const double service = sample_transmission_time(xi[p.sensor_index], snr, fading.next_u01());
    tx_end = now + service;
    in_tx = p;
    tx_busy = true;
  };

  auto start_processing = [&](Packet p, double now) {
    p.processing_start = now;
    proc_end = now + zp[p.sensor_index];
    p.processing_end = proc_end;
    in_proc = p;
    proc_busy = true;
  };

  auto deliver = [&](Packet p, double now) {
    p.departure_time = now;
    --in_flight;
    SensorAccounting& a = acct[p.sensor_index];
    ++a.delivered;
    if (a.delivered > sim.warmup_packets) {
      ++a.window_count;
      a.wp_sum += p.processing_start - p.arrival_time;
      a.wt_sum += p.transmission_start - p.processing_end;
      if (a.last_arrival != kInf) {
        const double paoi = p.departure_time - a.last_arrival;
        const std::size_t count = a.measured + 1;
        const double delta = paoi - a.paoi_mean;
        a.paoi_mean += delta / static_cast<double>(count);
        a.paoi_m2 += delta * (paoi - a.paoi_mean);
        a.measured = count;
        if (count == sim.packets_per_sensor) ++sensors_done;
      }
    }
    a.last_arrival = p.arrival_time;
    if (sim.record_packets) stats.packets.push_back(p);
  };

  while (sensors_done < n) {
    // next event: a sensor arrival, the processing completion, or the
    // transmission completion; ties resolve in that fixed order
    double when = kInf;
    std::size_t which = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (next_arrival[j] < when) {
        when = next_arrival[j];
        which = j;
      }
    if (proc_busy && proc_end < when) {
      when = proc_end;
      which = n;
    }
    if (tx_busy && tx_end < when) {
      when = tx_end;
      which = n + 1;
    }

    if (which < n) {
      const std::size_t j = which;
      Packet p;
      p.sensor_index = static_cast<int>(j);
      p.arrival_time = when;
      ++in_flight;
      if (in_flight > kMaxInFlight) {
        stats.saturated = true;
        break;
      }
      if (!proc_busy)
        start_processing(p, when);
      else
        stage1[j].push_back(p);
      next_arrival[j] = when + arrivals[j].next_exponential(rates[j]);
    } else if (which == n) {
      Packet done = in_proc;
      done.processing_end = when;
      proc_busy = false;
      proc_end = kInf;
      if (!tx_busy)
        start_transmission(done, when);
      else
        stage2.push_back(done);
      for (std::size_t j = 0; j < n; ++j)
        if (!stage1[j].empty()) {
          Packet next = stage1[j].front();
          stage1[j].pop_front();
          start_processing(next, when);
          break;
        }
    } else {
      Packet done = in_tx;
      tx_busy = false;
      tx_end = kInf;
      deliver(done, when);
      if (!stage2.empty()) {
        Packet next = stage2.front();
        stage2.pop_front();
        start_transmission(next, when);
      }
    }
  }

  stats.per_sensor_mean_paoi.resize(n);
  stats.paoi_stderr.resize(n);
  stats.mean_processing_wait.resize(n);
  stats.mean_transmission_wait.resize(n);
  stats.delivered_count.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const SensorAccounting& a = acct[j];
    stats.delivered_count[j] = a.window_count;
    stats.per_sensor_mean_paoi[j] = a.measured > 0 ? a.paoi_mean : 0.0;
    stats.paoi_stderr[j] =
        a.measured >= 2
            ? std::sqrt(a.paoi_m2 / static_cast<double>(a.measured - 1) /
                        static_cast<double>(a.measured))
            : 0.0;
    stats.mean_processing_wait[j] =
        a.window_count > 0 ? a.wp_sum / static_cast<double>(a.window_count) : 0.0;
    stats.mean_transmission_wait[j] =
        a.window_count > 0 ? a.wt_sum / static_cast<double>(a.window_count) : 0.0;
  }
  return stats;
}

}  // namespace aoi
