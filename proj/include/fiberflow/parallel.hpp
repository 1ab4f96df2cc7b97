#pragma once

namespace fiberflow {

/// Apply the FIBERFLOW_THREADS cap (if set) to the OpenMP runtime. Returns the
/// resulting thread count. Call once at program start.
int configure_threads();

}  // namespace fiberflow
