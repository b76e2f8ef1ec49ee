#include "logevo/parallel.hpp"

#include <omp.h>

namespace logevo {

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

namespace detail {

void parallel_for_impl(std::size_t count, void (*body)(void*, std::size_t), void* ctx) {
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) body(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail

}  // namespace logevo
