#pragma once

namespace aoi {

// Applies AOI_TANDEM_THREADS to the OpenMP runtime. A positive integer pins
// the thread count; 0, unset, or unparsable leaves the runtime default.
void configure_threads();

int max_threads();

}  // namespace aoi
