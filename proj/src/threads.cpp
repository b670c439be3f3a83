#include "stochlab/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stochlab {

namespace {
int g_explicit_cap = 0;
}

void set_max_threads(int n) { g_explicit_cap = n > 0 ? n : 0; }

int max_threads() {
#ifdef _OPENMP
    if (g_explicit_cap > 0) return g_explicit_cap;
    if (const char* env = std::getenv("STOCHLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace stochlab
