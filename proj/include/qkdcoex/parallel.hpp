#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qkdcoex {

// Execution policy for the data-parallel kernels (sweeps, time series,
// calibration restarts). Every kernel writes results by index, so the
// parallel path is bit-identical to the serial reference.
enum class ExecPolicy {
    serial,
    parallel,
};

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename Body>
void for_each_index(std::size_t n, ExecPolicy policy, Body&& body) {
#ifdef _OPENMP
    if (policy == ExecPolicy::parallel) {
        // Exceptions may not unwind out of the parallel region; keep the
        // lowest-index one so failures are reported deterministically.
        std::exception_ptr error;
        std::size_t error_index = std::numeric_limits<std::size_t>::max();
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(qkdcoex_for_each_index_error)
                if (static_cast<std::size_t>(i) < error_index) {
                    error_index = static_cast<std::size_t>(i);
                    error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#else
    (void)policy;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

// splitmix64; used to derive independent per-index RNG streams so that
// stochastic kernels stay deterministic under any thread count.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace qkdcoex
