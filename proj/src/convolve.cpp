#include "stochlab/convolve.hpp"

#include "stochlab/errors.hpp"
#include "stochlab/fft.hpp"

#include <cmath>

namespace stochlab {

namespace {

std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = next_pow2(a.size() + b.size() - 1);
    std::vector<std::complex<double>> fa(n), fb(n);
    for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft(fa, false);
    fft(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft(fa, true);
    std::vector<double> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fa[i].real();
    return out;
}

} // namespace

GridPdf grid_convolve(const GridPdf& f_in, const GridPdf& g_in, ConvMethod method) {
    if (f_in.density.empty() || g_in.density.empty()) throw rejected_input("grid_convolve: empty grid");

    GridPdf f = f_in, g = g_in;
    if (std::abs(f.dx - g.dx) > 1e-12 * std::max(f.dx, g.dx)) {
        // resample the coarser grid onto the finer spacing
        if (f.dx > g.dx)
            f = f.resampled(g.dx);
        else
            g = g.resampled(f.dx);
    }
    if (std::abs(f.dx - g.dx) > 1e-12 * std::max(f.dx, g.dx))
        throw rejected_input("grid_convolve: dx mismatch after resampling");

    std::vector<double> vals = method == ConvMethod::direct ? convolve_direct(f.density, g.density)
                                                            : convolve_fft(f.density, g.density);
    // Riemann weight for the integral; round-off negatives are clipped.
    for (double& v : vals) {
        v *= f.dx;
        if (v < 0.0) v = 0.0;
    }
    GridPdf out(f.x0 + g.x0, f.dx, std::move(vals));
    out.normalize();
    return out;
}

} // namespace stochlab
