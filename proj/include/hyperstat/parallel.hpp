#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hyperstat::parallel {

/// Execution mode for the data-parallel kernels. Serial is the reference
/// implementation kept for testing; OpenMP is the production path. Both
/// must produce bit-identical results: work is split into fixed index
/// blocks with per-block substreams, and partial results are folded in
/// block order regardless of which thread produced them.
enum class Mode { Serial, OpenMP };

/// Samples per block. Fixed: the block layout is part of every estimator's
/// definition, so results do not depend on thread count.
inline constexpr std::int64_t kBlockSize = 8192;

/// Thread budget: OpenMP's max, capped by the HYPERSTAT_THREADS env var.
inline int max_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* cap = std::getenv("HYPERSTAT_THREADS")) {
        const long c = std::strtol(cap, nullptr, 10);
        if (c >= 1 && c < n) n = static_cast<int>(c);
    }
    return n;
}

inline std::int64_t block_count(std::int64_t n, std::int64_t block_size = kBlockSize) {
    return n <= 0 ? 0 : (n + block_size - 1) / block_size;
}

/// Runs kernel(b) for every block index b in [0, nblocks) and returns the
/// per-block results indexed by block. The caller folds them in order.
template <class T, class Kernel>
std::vector<T> map_blocks(std::int64_t nblocks, Mode mode, Kernel&& kernel) {
    std::vector<T> out(static_cast<std::size_t>(nblocks));
    if (mode == Mode::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
        for (std::int64_t b = 0; b < nblocks; ++b) out[static_cast<std::size_t>(b)] = kernel(b);
    } else {
        for (std::int64_t b = 0; b < nblocks; ++b) out[static_cast<std::size_t>(b)] = kernel(b);
    }
    return out;
}

}  // namespace hyperstat::parallel
