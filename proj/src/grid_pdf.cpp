#include "stochlab/grid_pdf.hpp"

#include "stochlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace stochlab {

GridPdf::GridPdf(double x0_, double dx_, std::vector<double> d)
    : x0(x0_), dx(dx_), density(std::move(d)) {
    if (dx <= 0.0) throw rejected_input("GridPdf: dx must be > 0");
    if (density.empty()) throw rejected_input("GridPdf: empty grid");
}

double GridPdf::integral() const {
    if (density.size() < 2) return density.empty() ? 0.0 : density[0] * dx;
    double s = 0.5 * (density.front() + density.back());
    for (std::size_t i = 1; i + 1 < density.size(); ++i) s += density[i];
    return s * dx;
}

GridPdf& GridPdf::normalize() {
    double m = integral();
    if (!(m > 0.0)) throw numerical_failure("GridPdf::normalize: zero or negative mass");
    for (double& v : density) v /= m;
    return *this;
}

void GridPdf::validate(double tol) const {
    if (density.empty()) throw rejected_input("GridPdf: empty grid");
    for (double v : density)
        if (v < 0.0 || !std::isfinite(v)) throw rejected_input("GridPdf: negative or non-finite density");
    double m = integral();
    if (std::abs(m - 1.0) > tol)
        throw rejected_input("GridPdf: not normalized (mass " + std::to_string(m) + ")");
}

double GridPdf::moment(int k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        double w = (i == 0 || i + 1 == density.size()) ? 0.5 : 1.0;
        s += w * std::pow(x(i), k) * density[i];
    }
    return s * dx;
}

double GridPdf::central_moment(int k) const {
    double mu = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        double w = (i == 0 || i + 1 == density.size()) ? 0.5 : 1.0;
        s += w * std::pow(x(i) - mu, k) * density[i];
    }
    return s * dx;
}

double GridPdf::at(double xq) const {
    double u = (xq - x0) / dx;
    if (u < 0.0 || u > static_cast<double>(density.size() - 1)) return 0.0;
    auto i = static_cast<std::size_t>(u);
    if (i + 1 >= density.size()) return density.back();
    double f = u - static_cast<double>(i);
    return density[i] * (1.0 - f) + density[i + 1] * f;
}

GridPdf GridPdf::resampled(double new_dx) const {
    if (new_dx <= 0.0) throw rejected_input("resampled: dx must be > 0");
    auto n = static_cast<std::size_t>(std::floor((xmax() - x0) / new_dx)) + 1;
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = at(x0 + static_cast<double>(i) * new_dx);
    GridPdf out(x0, new_dx, std::move(d));
    out.normalize();
    return out;
}

void GridPdf::write_csv(std::ostream& os) const {
    os << "x,density\n";
    os.precision(17);
    for (std::size_t i = 0; i < density.size(); ++i) os << x(i) << ',' << density[i] << '\n';
}

GridPdf GridPdf::read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw io_error("GridPdf csv: empty stream");
    std::vector<double> xs, ds;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double xv, dv;
        char comma;
        if (!(ss >> xv >> comma >> dv))
            throw io_error("GridPdf csv: parse failure at line " + std::to_string(lineno));
        xs.push_back(xv);
        ds.push_back(dv);
    }
    if (xs.size() < 2) throw io_error("GridPdf csv: needs at least 2 rows");
    return GridPdf(xs[0], xs[1] - xs[0], std::move(ds));
}

GridPdf gaussian_pdf(double mean, double sigma, double dx, double halfwidth_sigmas) {
    if (sigma <= 0.0 || dx <= 0.0) throw rejected_input("gaussian_pdf: sigma and dx must be > 0");
    double half = halfwidth_sigmas * sigma;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * half / dx)) + 1;
    std::vector<double> d(n);
    double x0 = mean - half;
    double inv = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i < n; ++i) {
        double z = (x0 + static_cast<double>(i) * dx - mean) / sigma;
        d[i] = inv * std::exp(-0.5 * z * z);
    }
    GridPdf out(x0, dx, std::move(d));
    out.normalize();
    return out;
}

GridPdf lorentzian_pdf(double gamma, double dx, double cut, double* tail_mass) {
    if (gamma <= 0.0 || dx <= 0.0) throw rejected_input("lorentzian_pdf: gamma and dx must be > 0");
    double half = cut * gamma;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * half / dx)) + 1;
    std::vector<double> d(n);
    double x0 = -half;
    for (std::size_t i = 0; i < n; ++i) {
        double z = (x0 + static_cast<double>(i) * dx) / gamma;
        d[i] = 1.0 / (M_PI * gamma * (1.0 + z * z));
    }
    if (tail_mass) *tail_mass = 1.0 - (2.0 / M_PI) * std::atan(cut);
    GridPdf out(x0, dx, std::move(d));
    out.normalize();
    return out;
}

double CumulantSet::skewness() const { return c2 > 0.0 ? c3 / std::pow(c2, 1.5) : 0.0; }
double CumulantSet::excess_kurtosis() const { return c2 > 0.0 ? c4 / (c2 * c2) : 0.0; }

CumulantSet cumulants(const std::vector<double>& samples) {
    if (samples.size() < 4) throw rejected_input("cumulants: need at least 4 samples");
    double n = static_cast<double>(samples.size());
    double mu = 0.0;
    for (double v : samples) mu += v;
    mu /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        double d = v - mu;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    return {mu, m2, m3, m4 - 3.0 * m2 * m2};
}

CumulantSet cumulants(const GridPdf& pdf) {
    pdf.validate();
    double m2 = pdf.central_moment(2);
    double m3 = pdf.central_moment(3);
    double m4 = pdf.central_moment(4);
    return {pdf.mean(), m2, m3, m4 - 3.0 * m2 * m2};
}

} // namespace stochlab
