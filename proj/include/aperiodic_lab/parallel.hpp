#ifndef APERIODIC_LAB_PARALLEL_HPP
#define APERIODIC_LAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace aplab {

// Default worker count: $APERIODIC_LAB_THREADS, else 1.
inline unsigned default_threads() {
    if (const char* env = std::getenv("APERIODIC_LAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return 1;
}

// Split [0, n) into `workers` contiguous chunks and run fn(worker, begin, end)
// on each.  Chunk boundaries depend only on n and workers.
template <class F>
void parallel_chunks(std::size_t n, unsigned workers, F&& fn) {
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        fn(0U, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = std::min(n, w * step);
        const std::size_t e = std::min(n, b + step);
        pool.emplace_back([&, w, b, e] {
            try {
                fn(w, b, e);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace aplab

#endif  // APERIODIC_LAB_PARALLEL_HPP
