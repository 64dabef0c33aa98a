#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pdkde {

// Worker count for parallel regions: an explicit request wins, then the
// PDKDE_THREADS environment variable, then the OpenMP default. Returns 1
// when built without OpenMP.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PDKDE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace pdkde
