#include "aoi/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/rng.hpp"

namespace aoi {

namespace {

constexpr std::size_t kBlock = 65536;

McEstimate finalize(double sum, double sum_sq, std::size_t n) {
  McEstimate out;
  out.samples = n;
  if (n == 0) return out;
  out.mean = sum / static_cast<double>(n);
  if (n >= 2) {
    const double nd = static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - sum * sum / nd) / (nd - 1.0));
    out.std_error = std::sqrt(var / nd);
  }
  return out;
}

}  // namespace

double sample_transmission_time(double xi, double snr, double u01) {
  double h = -std::log1p(-u01);
  h = std::clamp(h, kFadingFloor, kFadingCap);
  return xi / std::log1p(snr * h);
}

McEstimate mc_transmission_mean(double xi, double snr, std::size_t samples, std::uint64_t seed) {
  const std::uint64_t base = rng::stream_seed(seed, rng::kFadingStream);
  const std::size_t n_blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks, 0.0);
  std::vector<double> block_sum_sq(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
    const std::size_t end = std::min(begin + kBlock, samples);
    double s = 0.0, ss = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double z = sample_transmission_time(xi, snr, rng::u01_at(base, i));
      s += z;
      ss += z * z;
    }
    block_sum[static_cast<std::size_t>(b)] = s;
    block_sum_sq[static_cast<std::size_t>(b)] = ss;
  }
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    sum += block_sum[b];
    sum_sq += block_sum_sq[b];
  }
  return finalize(sum, sum_sq, samples);
}

McEstimate mc_transmission_mean_serial(double xi, double snr, std::size_t samples,
                                       std::uint64_t seed) {
  const std::uint64_t base = rng::stream_seed(seed, rng::kFadingStream);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double z = sample_transmission_time(xi, snr, rng::u01_at(base, i));
    sum += z;
    sum_sq += z * z;
  }
  return finalize(sum, sum_sq, samples);
}

}  // namespace aoi
