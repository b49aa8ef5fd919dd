#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace carnot {

/// Selects between the OpenMP kernel and its serial reference. Both paths
/// visit the same indices with the same per-index random streams, so results
/// are identical; the serial path exists for testing and benchmarking.
enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n). Exceptions thrown by body are captured and
/// the first one is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace carnot
