#pragma once

namespace stochlab {

// Thread cap for OpenMP kernels. Resolution order: explicit set_max_threads()
// call, then the STOCHLAB_THREADS environment variable, then the OpenMP
// default. Returns 1 when built without OpenMP.
int max_threads();
void set_max_threads(int n);

// True when the parallel kernels were compiled with OpenMP support.
bool openmp_enabled();

} // namespace stochlab
