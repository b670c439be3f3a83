#pragma once

#include "stochlab/grid_pdf.hpp"

namespace stochlab {

enum class ConvMethod { fft, direct };

// Density of the sum of two independent variables on the grid
// [f.x0+g.x0, f.xmax+g.xmax]. Inputs must share dx; when they do not, the
// coarser one is resampled first. Result is renormalized. The direct path is
// the O(n^2) reference; fft is the default and agrees pointwise to 1e-9.
GridPdf grid_convolve(const GridPdf& f, const GridPdf& g, ConvMethod method = ConvMethod::fft);

} // namespace stochlab
