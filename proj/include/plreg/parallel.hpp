#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace plreg {

// Runs f(i) for i in [0, n). With parallel=true the iterations execute under
// OpenMP; callers must write results by index so serial and parallel runs are
// bit-identical. The serial path is the reference used by the tests and the
// benchmark tool.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& f, bool parallel = true) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
        return;
    }
#else
    (void)parallel;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
}

}  // namespace plreg
