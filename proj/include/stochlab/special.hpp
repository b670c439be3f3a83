#pragma once

namespace stochlab {

// Digamma for x > 0: upward recurrence into the asymptotic region, then the
// Bernoulli series through x^-12. Absolute error below 1e-12 on x >= 1e-6.
double digamma(double x);

} // namespace stochlab
