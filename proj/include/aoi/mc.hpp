#pragma once

#include <cstddef>
#include <cstdint>

namespace aoi {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// one draw of the truncated fading service law from a uniform variate
double sample_transmission_time(double xi, double snr, double u01);

// Monte-Carlo mean of the fading service law. The parallel kernel assigns
// fixed 64k-sample blocks to threads, sums each block serially, and reduces
// the block sums in block order, so the result is bit-identical for any
// thread count and equals a blocked serial evaluation. The serial variant is
// the straight-loop reference (different summation order, equal to ~1e-12).
McEstimate mc_transmission_mean(double xi, double snr, std::size_t samples, std::uint64_t seed);
McEstimate mc_transmission_mean_serial(double xi, double snr, std::size_t samples,
                                       std::uint64_t seed);

}  // namespace aoi
