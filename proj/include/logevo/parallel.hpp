#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace logevo {

/// Sets the OpenMP team size used by the sweeps; n <= 0 keeps the default.
void set_thread_count(int n);
int thread_count();

namespace detail {
void parallel_for_impl(std::size_t count, void (*body)(void*, std::size_t), void* ctx);
}

/// Runs body(i) for i in [0, count) across the OpenMP team. The first
/// exception thrown by any iteration is rethrown on the calling thread once
/// the loop has finished.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  struct Ctx {
    Body* body;
    std::exception_ptr error;
    std::mutex mutex;
  } ctx{&body, nullptr, {}};
  detail::parallel_for_impl(
      count,
      [](void* raw, std::size_t i) {
        auto* c = static_cast<Ctx*>(raw);
        try {
          (*c->body)(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(c->mutex);
          if (!c->error) c->error = std::current_exception();
        }
      },
      &ctx);
  if (ctx.error) std::rethrow_exception(ctx.error);
}

}  // namespace logevo
