#include "lgbt/parallel.hpp"

#include <cstdlib>
#include <string>

#if defined(LGBT_HAVE_OPENMP)
#include <omp.h>
#endif

namespace lgbt {

namespace {
int g_default_threads = -1;
}

void set_max_threads(int n) {
#if defined(LGBT_HAVE_OPENMP)
  if (g_default_threads < 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_threads);
#else
  (void)n;
#endif
}

int max_threads() {
#if defined(LGBT_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_thread_env() {
  if (const char* env = std::getenv("GBT_THREADS")) {
    try {
      set_max_threads(std::stoi(env));
    } catch (const std::exception&) {
      // ignored: malformed values keep the runtime default
    }
  }
}

}  // namespace lgbt
