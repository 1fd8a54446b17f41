#include "aoi/threads.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace aoi {

void configure_threads() {
  const char* env = std::getenv("AOI_TANDEM_THREADS");
  if (!env || !*env) return;
  int n = 0;
  const auto res = std::from_chars(env, env + std::strlen(env), n);
  if (res.ec != std::errc{} || res.ptr != env + std::strlen(env)) return;
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace aoi
