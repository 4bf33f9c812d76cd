// parallel.hpp -- OpenMP helpers with run-to-run determinism.
//
// Reductions are accumulated in fixed-size index blocks and the block
// partials are combined serially in block order, so results are bit-identical
// for any thread count. Hot kernels that need a different loop structure
// follow the same blocking rule locally.

#pragma once

#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace srbath::par {

inline constexpr std::int64_t block_size = 1024;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Deterministic sum of f(i) for i in [0, n).
template <class F>
double block_sum(std::int64_t n, F&& f) {
    if (n <= 0) return 0.0;
    const std::int64_t nblocks = (n + block_size - 1) / block_size;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t lo = b * block_size;
        const std::int64_t hi = std::min(n, lo + block_size);
        double acc = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) acc += f(i);
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

inline double dot(const double* a, const double* b, std::int64_t n) {
    return block_sum(n, [&](std::int64_t i) { return a[i] * b[i]; });
}

inline double norm2_squared(const double* a, std::int64_t n) {
    return block_sum(n, [&](std::int64_t i) { return a[i] * a[i]; });
}

}  // namespace srbath::par
