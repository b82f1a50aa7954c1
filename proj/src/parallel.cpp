#include "graphrho/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace graphrho {

void apply_thread_env() {
#ifdef _OPENMP
  const char* env = std::getenv("GRAPH_RHO_THREADS");
  if (!env) return;
  try {
    int n = std::stoi(env);
    if (n >= 1) omp_set_num_threads(n);
  } catch (const std::exception&) {
    // ignore malformed values; the OpenMP default stands
  }
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace graphrho
