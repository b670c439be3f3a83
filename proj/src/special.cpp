#include "stochlab/special.hpp"

#include "stochlab/errors.hpp"

#include <cmath>

namespace stochlab {

double digamma(double x) {
    if (!(x > 0.0)) throw rejected_input("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    // ln x - 1/(2x) - sum B_{2n}/(2n x^{2n})
    double series = std::log(x) - 0.5 * inv -
                    inv2 * (1.0 / 12.0 -
                            inv2 * (1.0 / 120.0 -
                                    inv2 * (1.0 / 252.0 -
                                            inv2 * (1.0 / 240.0 -
                                                    inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    return acc + series;
}

} // namespace stochlab
