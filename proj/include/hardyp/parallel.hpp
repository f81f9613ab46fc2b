#pragma once

#include <cstddef>

namespace hardyp {

// Execution policy for the data-parallel kernels.  Every kernel has a plain
// serial loop kept as the reference implementation; the OpenMP path must
// produce bit-identical results (each index is computed independently, no
// cross-iteration reductions).
enum class Exec { serial, openmp };

template <class F>
void for_index(std::size_t n, Exec ex, F&& f) {
    if (ex == Exec::openmp) {
#pragma omp parallel for schedule(dynamic, 8)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

} // namespace hardyp
