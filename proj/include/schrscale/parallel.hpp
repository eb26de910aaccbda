#pragma once

#include <utility>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace schrscale {

// Worker count used by the OpenMP kernels.  Resolution order: programmatic
// override, then the SCHRSCALE_THREADS environment variable, then the OpenMP
// runtime default.  Always >= 1.
int max_workers();

// Override the worker count for this process; pass 0 to fall back to the
// environment/runtime resolution.  Results never depend on the value, only
// wall time does.
void set_max_workers(int n);

// Statically scheduled loop over [0, count).  The body must be pure per
// index; every kernel built on this is bitwise identical for any worker
// count.
template <class F>
void parallel_for(long count, F&& body) {
    if (count <= 0) return;
#if defined(_OPENMP)
    const int workers = max_workers();
    if (workers > 1 && count > 1) {
#pragma omp parallel for num_threads(workers) schedule(static)
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
#endif
    for (long i = 0; i < count; ++i) body(i);
}

} // namespace schrscale
