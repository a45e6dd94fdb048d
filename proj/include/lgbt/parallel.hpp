#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>

namespace lgbt {

/// Selects the serial reference loop or the OpenMP kernel. Both visit the same
/// index set and write results by index, so outputs are identical.
enum class Execution { serial, parallel };

/// Caps the OpenMP worker count; 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

/// Reads GBT_THREADS and applies it when set.
void apply_thread_env();

template <typename Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const long long count = static_cast<long long>(n);
#if defined(LGBT_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lgbt
