#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace mcloss {

enum class Execution { Serial, Parallel };

int parallel_threads();

// Calls fn(i) for i in [0, n). The parallel path distributes indices with
// OpenMP; the serial path is the reference loop. Exceptions thrown by fn are
// rethrown on the calling thread.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mcloss
