#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tcam {

// Upper bound on concurrent regression fits. threads == 1 runs the plain
// serial loop, which is the reference path the parallel one is tested against.
struct Execution {
    int threads = 1;

    static Execution serial() { return {1}; }
};

// Runs body(i) for i in [0, n). Each index must write only to its own slot of
// the output, so results do not depend on the thread count. The first
// exception thrown by any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, const Execution& exec, Body&& body) {
    if (exec.threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for num_threads(exec.threads) schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace tcam
