#include "fiberflow/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fiberflow {

int configure_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("FIBERFLOW_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) omp_set_num_threads(cap);
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fiberflow
