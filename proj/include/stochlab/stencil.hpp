#pragma once

namespace stochlab {

// 5-point central derivative stencils with one Richardson step (h, h/2).
// Used for analytic curves (eigenvalue branches, log-integrands) where the
// O(h^4) truncation is far below the target tolerances.
template <typename F>
double deriv1(F&& f, double x, double h = 1e-4) {
    auto d = [&](double hh) {
        return (f(x - 2 * hh) - 8.0 * f(x - hh) + 8.0 * f(x + hh) - f(x + 2 * hh)) / (12.0 * hh);
    };
    return (16.0 * d(h / 2) - d(h)) / 15.0;
}

template <typename F>
double deriv2(F&& f, double x, double h = 1e-4) {
    auto d = [&](double hh) {
        return (-f(x - 2 * hh) + 16.0 * f(x - hh) - 30.0 * f(x) + 16.0 * f(x + hh) - f(x + 2 * hh)) /
               (12.0 * hh * hh);
    };
    return (16.0 * d(h / 2) - d(h)) / 15.0;
}

} // namespace stochlab
