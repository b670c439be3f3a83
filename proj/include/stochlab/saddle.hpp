#pragma once

#include <functional>

namespace stochlab {

// Laplace/steepest-descent estimate of log of I(k) = int f(z) e^{k phi(z)} dz
// around the interior maximizer z* of phi in [lo, hi]:
//   log I ~= 0.5*log(2*pi / (-k*phi''(z*))) + log f(z*) + k*phi(z*).
// phi must be twice differentiable (derivatives taken by stencil); the
// maximizer is located by Newton on phi' to |phi'| < 1e-10.
struct SaddleResult {
    double z_star;
    double log_estimate;
    double phi_second; // phi''(z*), negative for a valid maximum
};

SaddleResult saddle_point_estimate(const std::function<double(double)>& phi, double k, double lo,
                                   double hi,
                                   const std::function<double(double)>& f = nullptr);

} // namespace stochlab
