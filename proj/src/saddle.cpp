#include "stochlab/saddle.hpp"

#include "stochlab/errors.hpp"
#include "stochlab/stencil.hpp"

#include <cmath>

namespace stochlab {

SaddleResult saddle_point_estimate(const std::function<double(double)>& phi, double k, double lo,
                                   double hi, const std::function<double(double)>& f) {
    if (!(hi > lo)) throw rejected_input("saddle_point_estimate: empty bracket");

    auto dphi = [&](double z) { return deriv1(phi, z); };

    // Bracket a sign change of phi' on a coarse scan, then bisect/Newton.
    const int scan = 64;
    double a = lo, b = hi, fa = dphi(lo);
    bool found = false;
    for (int i = 1; i <= scan; ++i) {
        double z = lo + (hi - lo) * static_cast<double>(i) / scan;
        double fz = dphi(z);
        if (fa > 0.0 && fz <= 0.0) { // descending crossing = maximum
            b = z;
            a = lo + (hi - lo) * static_cast<double>(i - 1) / scan;
            found = true;
            break;
        }
        fa = fz;
    }
    if (!found) throw saddle_not_found("saddle_point_estimate: no maximum of phi in bracket");

    double z = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
        double g = dphi(z);
        if (std::abs(g) < 1e-10) break;
        double h = deriv2(phi, z);
        double step = (h != 0.0) ? -g / h : 0.0;
        double zn = z + step;
        if (!(zn > a && zn < b) || h == 0.0) { // fall back to bisection
            if (g > 0.0)
                a = z;
            else
                b = z;
            zn = 0.5 * (a + b);
        } else {
            if (g > 0.0)
                a = z;
            else
                b = z;
        }
        z = zn;
        if (it == 99 && std::abs(dphi(z)) >= 1e-10)
            throw numerical_failure("saddle_point_estimate: Newton did not converge");
    }

    double h2 = deriv2(phi, z);
    if (!(h2 < 0.0)) throw invalid_saddle("saddle_point_estimate: phi''(z*) >= 0");

    double logf = f ? std::log(f(z)) : 0.0;
    double log_est = 0.5 * std::log(2.0 * M_PI / (-k * h2)) + logf + k * phi(z);
    return {z, log_est, h2};
}

} // namespace stochlab
