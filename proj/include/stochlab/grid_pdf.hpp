#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stochlab {

// Probability density sampled on a uniform grid x0 + i*dx.
// Densities are non-negative; after normalize() the trapezoidal integral
// is 1 within 1e-6 (checked by validate()).
struct GridPdf {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> density;

    GridPdf() = default;
    GridPdf(double x0_, double dx_, std::vector<double> d);

    std::size_t size() const { return density.size(); }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double xmax() const { return density.empty() ? x0 : x(density.size() - 1); }

    double integral() const;       // trapezoidal mass
    GridPdf& normalize();          // scale so integral() == 1
    void validate(double tol = 1e-6) const;

    // Raw (non-central) and central moments by trapezoid.
    double moment(int k) const;
    double mean() const { return moment(1); }
    double central_moment(int k) const;

    // Linear-interpolation value at x; 0 outside the grid.
    double at(double xq) const;

    // Resample onto spacing new_dx by linear interpolation (same span).
    GridPdf resampled(double new_dx) const;

    // CSV with header "x,density".
    void write_csv(std::ostream& os) const;
    static GridPdf read_csv(std::istream& is);
};

// Convenience constructors used throughout the engines and tests.
GridPdf gaussian_pdf(double mean, double sigma, double dx, double halfwidth_sigmas = 10.0);
// Lorentzian truncated at +-cut*gamma and renormalized; tail_mass, when given,
// receives the mass discarded by the truncation.
GridPdf lorentzian_pdf(double gamma, double dx, double cut = 50.0, double* tail_mass = nullptr);

// First four cumulants plus the standardized shape numbers.
struct CumulantSet {
    double c1 = 0.0; // mean
    double c2 = 0.0; // variance
    double c3 = 0.0; // third cumulant
    double c4 = 0.0; // fourth cumulant (excess form)
    double skewness() const;       // c3 / c2^{3/2}
    double excess_kurtosis() const; // c4 / c2^2

    CumulantSet operator+(const CumulantSet& o) const {
        return {c1 + o.c1, c2 + o.c2, c3 + o.c3, c4 + o.c4};
    }
};

CumulantSet cumulants(const std::vector<double>& samples); // needs >= 4 samples
CumulantSet cumulants(const GridPdf& pdf);                 // needs a normalized pdf

} // namespace stochlab
