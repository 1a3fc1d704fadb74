#pragma once

#include <exception>
#include <mutex>

#include "cwishart/matrix.hpp"

namespace cwishart {

/// How trial loops run. workers <= 1 is the plain serial loop.
struct Execution {
    int workers = 1;

    static Execution serial() { return {1}; }
    static Execution parallel(int workers) { return {workers}; }
};

/// Number of hardware threads OpenMP would use by default.
int default_workers();

namespace detail {
void parallel_for(Index count, int workers, void (*body)(Index, void*), void* ctx);
}

/// Calls fn(i) for i in [0, count). Each index is an independent work item;
/// callers write results into slot i so the reduction order never depends on
/// the schedule. The first exception thrown by any item is rethrown.
template <class Fn>
void for_each_index(Index count, const Execution& exec, Fn&& fn) {
    if (exec.workers <= 1) {
        for (Index i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    struct Context {
        Fn* fn;
        std::exception_ptr error;
        std::mutex lock;
    } ctx{&fn, nullptr, {}};
    detail::parallel_for(
        count, exec.workers,
        [](Index i, void* raw) {
            auto* c = static_cast<Context*>(raw);
            try {
                (*c->fn)(i);
            } catch (...) {
                const std::lock_guard<std::mutex> guard(c->lock);
                if (!c->error) {
                    c->error = std::current_exception();
                }
            }
        },
        &ctx);
    if (ctx.error) {
        std::rethrow_exception(ctx.error);
    }
}

} // namespace cwishart
