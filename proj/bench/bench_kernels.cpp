#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "aoi/config_io.hpp"
#include "aoi/mc.hpp"
#include "aoi/model.hpp"
#include "aoi/threads.hpp"

using namespace aoi;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  std::size_t samples = 20000000;
  if (argc > 1) samples = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));

  const SystemConfig c = make_table2_preset();
  const double snr = mean_snr(c.channel);
  const double xi = transmission_xi(c.channel, 2.0);

  std::printf("monte carlo transmission mean, %zu samples, %d thread(s)\n", samples,
              max_threads());

  auto t0 = clock_type::now();
  const McEstimate ser = mc_transmission_mean_serial(xi, snr, samples, 1);
  const double t_serial = seconds_since(t0);

  t0 = clock_type::now();
  const McEstimate par = mc_transmission_mean(xi, snr, samples, 1);
  const double t_parallel = seconds_since(t0);

  const double rel = std::abs(par.mean - ser.mean) / ser.mean;
  std::printf("serial:   %.3f s  mean %.15g\n", t_serial, ser.mean);
  std::printf("parallel: %.3f s  mean %.15g\n", t_parallel, par.mean);
  std::printf("speedup:  %.2fx  relative difference %.3g\n", t_serial / t_parallel, rel);
  if (rel > 1e-12) {
    std::printf("FAIL: kernels disagree beyond 1e-12\n");
    return 1;
  }
  std::printf("OK\n");
  return 0;
}
