#include "schrscale/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace schrscale {

namespace {

std::atomic<int> g_override{0};

int env_workers() {
    static const int cached = [] {
        const char* raw = std::getenv("SCHRSCALE_THREADS");
        if (raw == nullptr) return 0;
        const long parsed = std::strtol(raw, nullptr, 10);
        return parsed > 0 ? int(parsed) : 0;
    }();
    return cached;
}

} // namespace

int max_workers() {
    const int forced = g_override.load(std::memory_order_relaxed);
    if (forced > 0) return forced;
    const int from_env = env_workers();
    if (from_env > 0) return from_env;
#if defined(_OPENMP)
    return omp_get_max_threads() > 0 ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

void set_max_workers(int n) {
    g_override.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

} // namespace schrscale
