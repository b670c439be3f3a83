#include "stochlab/production.hpp"

#include "stochlab/convolve.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/threads.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

// ---- NoiseSpec --------------------------------------------------------------

NoiseSpec NoiseSpec::gaussian_noise(double sigma) {
    if (sigma <= 0.0) throw rejected_input("NoiseSpec: gaussian sigma must be > 0");
    NoiseSpec n;
    n.kind = NoiseKind::gaussian;
    n.sigma_a = sigma;
    return n;
}

NoiseSpec NoiseSpec::lorentzian_noise(double gamma, double cut) {
    if (gamma <= 0.0) throw rejected_input("NoiseSpec: lorentzian gamma must be > 0");
    NoiseSpec n;
    n.kind = NoiseKind::lorentzian;
    n.gamma = gamma;
    n.cut = cut;
    return n;
}

NoiseSpec NoiseSpec::custom_noise(GridPdf pdf) {
    pdf.validate();
    NoiseSpec n;
    n.kind = NoiseKind::custom;
    n.custom = std::move(pdf);
    return n;
}

GridPdf NoiseSpec::density(double dx) const {
    switch (kind) {
        case NoiseKind::gaussian: return gaussian_pdf(0.0, sigma_a, dx);
        case NoiseKind::lorentzian: return lorentzian_pdf(gamma, dx, cut);
        case NoiseKind::custom: return std::abs(custom.dx - dx) < 1e-15 ? custom : custom.resampled(dx);
    }
    throw rejected_input("NoiseSpec: unknown kind");
}

GridPdf NoiseSpec::mirrored_density(double dx) const {
    GridPdf d = density(dx);
    std::vector<double> rev(d.density.rbegin(), d.density.rend());
    return GridPdf(-d.xmax(), d.dx, std::move(rev));
}

double NoiseSpec::sample(Rng& rng) const {
    switch (kind) {
        case NoiseKind::gaussian: return sigma_a * rng.normal();
        case NoiseKind::lorentzian: return rng.cauchy_truncated(gamma, cut * gamma);
        case NoiseKind::custom: {
            // inverse-CDF on the grid
            double u = rng.uniform01();
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < custom.size(); ++i) {
                double cell = 0.5 * (custom.density[i] + custom.density[i + 1]) * custom.dx;
                if (acc + cell >= u) {
                    double f = cell > 0.0 ? (u - acc) / cell : 0.5;
                    return custom.x(i) + f * custom.dx;
                }
                acc += cell;
            }
            return custom.xmax();
        }
    }
    throw rejected_input("NoiseSpec: unknown kind");
}

double NoiseSpec::tail_mass() const {
    if (kind != NoiseKind::lorentzian) return 0.0;
    return 1.0 - (2.0 / M_PI) * std::atan(cut);
}

double NoiseSpec::width_scale() const {
    switch (kind) {
        case NoiseKind::gaussian: return sigma_a;
        case NoiseKind::lorentzian: return gamma;
        case NoiseKind::custom: return std::sqrt(std::max(custom.central_moment(2), 1e-12));
    }
    return 1.0;
}

void NoiseSpec::exp_moments(double& x, double& y) const {
    if (kind == NoiseKind::gaussian) {
        x = std::exp(0.5 * sigma_a * sigma_a);
        y = std::exp(2.0 * sigma_a * sigma_a);
        return;
    }
    GridPdf d = kind == NoiseKind::custom ? custom : density(gamma / 64.0);
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double w = (i == 0 || i + 1 == d.size()) ? 0.5 : 1.0;
        sx += w * std::exp(d.x(i)) * d.density[i];
        sy += w * std::exp(2.0 * d.x(i)) * d.density[i];
    }
    x = sx * d.dx;
    y = sy * d.dx;
}

// ---- Monte-Carlo route ------------------------------------------------------

namespace {
constexpr std::size_t kShards = 512;

struct Recorder {
    std::vector<int> times;
    PathEnsemble* out;
};
} // namespace

PathEnsemble simulate_paths(const ProductionModelSpec& spec, int t_max, std::size_t n_paths,
                            std::uint64_t seed, const std::vector<int>& record_times,
                            bool parallel) {
    if (n_paths < 1) throw rejected_input("simulate_paths: n_paths must be >= 1");
    if (t_max < 1) throw rejected_input("simulate_paths: t_max must be >= 1");

    std::vector<int> times = record_times.empty() ? std::vector<int>{t_max} : record_times;
    std::sort(times.begin(), times.end());
    for (int t : times)
        if (t < 1 || t > t_max) throw rejected_input("simulate_paths: record time outside [1, t_max]");

    PathEnsemble ens;
    for (int t : times) {
        ens.logz[t].resize(n_paths);
        ens.dlogz[t].resize(n_paths);
    }

    const double keep = 1.0 - spec.d; // depreciation enters as Z <- (1-d)Z + Q
    if (spec.d < 0.0 || spec.d >= 1.0) throw rejected_parameters("simulate_paths: d must be in [0,1)");

    auto run_shard = [&](std::size_t shard) {
        std::size_t lo = shard * n_paths / kShards;
        std::size_t hi = (shard + 1) * n_paths / kShards;
        if (lo >= hi) return;
        Rng rng(Rng::shard_seed(seed, shard));
        for (std::size_t p = lo; p < hi; ++p) {
            // R = Q_t/Z_t in (0,1]; logz accumulates log increments so Z_t
            // never materializes as a double.
            double r = 1.0;
            double logz = 0.0;
            std::size_t ti = 0;
            for (int t = 1; t <= t_max; ++t) {
                double a = spec.noise.sample(rng);
                double w = std::exp(spec.g + a) * r;
                double inc = std::log1p(w / keep) + std::log(keep); // log(Z_{t+1}/Z_t)
                logz += inc;
                r = w / (keep + w);
                while (ti < times.size() && times[ti] == t) {
                    ens.logz[t][p] = logz;
                    ens.dlogz[t][p] = inc;
                    ++ti;
                }
            }
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
        for (long s = 0; s < static_cast<long>(kShards); ++s) run_shard(static_cast<std::size_t>(s));
    } else {
        for (std::size_t s = 0; s < kShards; ++s) run_shard(s);
    }
    return ens;
}

// ---- recursion engine -------------------------------------------------------

namespace {

double auto_dx(const ProductionModelSpec& spec, const EvolveOptions& opt) {
    if (opt.dx > 0.0) return opt.dx;
    return std::min(0.005, spec.noise.width_scale() / 16.0);
}

// Trim grid cells outside the central mass (cumulative < trim per side).
GridPdf trim_pdf(const GridPdf& p, double trim) {
    if (trim <= 0.0) return p;
    std::size_t lo = 0, hi = p.size() - 1;
    double acc = 0.0;
    while (lo < hi && acc + p.density[lo] * p.dx < trim) acc += p.density[lo++] * p.dx;
    acc = 0.0;
    while (hi > lo && acc + p.density[hi] * p.dx < trim) acc += p.density[hi--] * p.dx;
    if (lo == 0 && hi == p.size() - 1) return p;
    std::vector<double> d(p.density.begin() + lo, p.density.begin() + hi + 1);
    GridPdf out(p.x(lo), p.dx, std::move(d));
    out.normalize();
    return out;
}

// Apply one recursion step to a branch density: given conv = noise * rho on
// its own grid, produce the image density under x -> log(1+e^{x}) shifted by
// the branch drift. Writing u(x) = log(e^x - 1) - drift, the new density is
// conv(u(x)) * u'(x); the mass of the sub-grid first cell is recovered by the
// exact change of variables (CDF of conv below u(x_first)).
GridPdf map_step(const GridPdf& conv, double drift, double dx, double domain_cap) {
    auto f = [](double s) { return s > 30.0 ? s : std::log1p(std::exp(s)); }; // log(1+e^s)
    auto finv = [&](double x) { // log(e^x - 1) - drift, overflow-safe
        return (x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x))) - drift;
    };
    double lo_img = f(conv.x0 + drift);
    double hi_img = f(conv.xmax() + drift);
    if (domain_cap > 0.0 && hi_img > domain_cap) {
        double ucap = finv(domain_cap);
        double edge = 0.0; // mass that would land beyond the cap
        for (std::size_t i = 0; i < conv.size(); ++i)
            if (conv.x(i) > ucap) edge += conv.density[i] * conv.dx;
        if (edge > 1e-4)
            throw grid_overflow("evolve_pdf: mass " + std::to_string(edge) +
                                " beyond domain cap; extend to >= " + std::to_string(hi_img));
        hi_img = domain_cap;
    }

    double x_first = std::max(dx, std::floor(lo_img / dx) * dx);
    auto n = static_cast<std::size_t>(std::ceil((hi_img - x_first) / dx)) + 1;
    std::vector<double> dens(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x_first + static_cast<double>(i) * dx;
        double u = finv(x);
        double jac = 1.0 / (1.0 - std::exp(-x));
        dens[i] = conv.at(u) * jac;
    }
    // mass below the first grid point, recovered exactly in u-space
    double u1 = finv(x_first);
    double below = 0.0;
    for (std::size_t i = 0; i + 1 < conv.size(); ++i) {
        double xa = conv.x(i), xb = conv.x(i + 1);
        if (xb <= u1)
            below += 0.5 * (conv.density[i] + conv.density[i + 1]) * conv.dx;
        else if (xa < u1) {
            below += 0.5 * (conv.density[i] + conv.at(u1)) * (u1 - xa);
            break;
        } else
            break;
    }
    dens[0] += below / dx;

    GridPdf out(x_first, dx, std::move(dens));
    double mass = out.integral();
    if (std::abs(mass - 1.0) > 1e-3)
        throw numerical_failure("evolve_pdf: step lost mass (integral " + std::to_string(mass) + ")");
    out.normalize();
    return out;
}

// Branch density at t=1 straight from the noise law (the t=0 delta makes the
// convolution trivial, so the map is applied exactly).
GridPdf first_step(const NoiseSpec& noise, bool mirrored, double drift, double dx) {
    GridPdf nd = mirrored ? noise.mirrored_density(dx) : noise.density(dx);
    return map_step(nd, drift, dx, 0.0);
}

} // namespace

PdfState initial_state(const ProductionModelSpec& spec, const EvolveOptions& opt) {
    double dx = auto_dx(spec, opt);
    PdfState st;
    st.t = 1;
    st.rho_z = first_step(spec.noise, false, spec.g, dx);
    st.rho_y = first_step(spec.noise, true, -spec.g, dx);
    return st;
}

PdfState evolve_pdf(const PdfState& state, const ProductionModelSpec& spec,
                    const EvolveOptions& opt) {
    state.rho_z.validate(1e-5);
    state.rho_y.validate(1e-5);
    double dx = state.rho_z.dx;
    double trim = opt.trim_tail > 0.0 ? opt.trim_tail : 1e-12;

    GridPdf conv_z = grid_convolve(spec.noise.density(dx), state.rho_z);
    GridPdf conv_y = grid_convolve(spec.noise.mirrored_density(dx), state.rho_y);

    PdfState next;
    next.t = state.t + 1;
    next.rho_z = trim_pdf(map_step(conv_z, spec.g, dx, opt.domain_cap), trim);
    next.rho_y = trim_pdf(map_step(conv_y, -spec.g, dx, opt.domain_cap), trim);
    return next;
}

GridPdf volatility_pdf(const PdfState& state) {
    const GridPdf& y = state.rho_y;
    if (y.x0 <= 0.0) throw rejected_input("volatility_pdf: y-grid must be strictly positive");
    // x = -log(1 - e^{-y}) maps (0,inf) onto itself and is its own inverse.
    auto G = [](double v) { return -std::log1p(-std::exp(-v)); };
    double x_hi = G(y.x0);
    double x_lo = std::max({G(y.xmax()), x_hi * 1e-9, 1e-300});
    double dx = std::max((x_hi - x_lo) / 4000.0, 1e-12);
    auto n = static_cast<std::size_t>(std::ceil((x_hi - x_lo) / dx)) + 1;
    std::vector<double> dens(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x_lo + static_cast<double>(i) * dx;
        double yy = G(x);
        dens[i] = y.at(yy) / std::expm1(x);
    }
    GridPdf out(x_lo, dx, std::move(dens));
    out.normalize();
    return out;
}

CumulantSet delta_cumulants_from_state(const PdfState& state) {
    const GridPdf& y = state.rho_y;
    auto G = [](double v) { return -std::log1p(-std::exp(-v)); };
    double tot = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double w = (i == 0 || i + 1 == y.size()) ? 0.5 : 1.0;
        double x = G(y.x(i));
        double p = w * y.density[i] * y.dx;
        tot += p;
        m1 += p * x;
        m2 += p * x * x;
        m3 += p * x * x * x;
        m4 += p * x * x * x * x;
    }
    m1 /= tot;
    m2 /= tot;
    m3 /= tot;
    m4 /= tot;
    double c2 = m2 - m1 * m1;
    double c3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    double m4c = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * std::pow(m1, 4);
    return {m1, c2, c3, m4c - 3.0 * c2 * c2};
}

// ---- closed forms -----------------------------------------------------------

namespace {

void require_gaussian_positive_drift(const ProductionModelSpec& spec, const char* who) {
    if (spec.noise.kind != NoiseKind::gaussian)
        throw out_of_regime(std::string(who) + ": closed form derived for gaussian noise");
    if (spec.g <= 0.0) throw out_of_regime(std::string(who) + ": closed form requires g > 0");
}

// Var(Delta log Z) at finite t, written with negative exponents only.
double var_delta_finite(double g, double sigma2, int t) {
    double A = std::exp(g);
    auto Am = [&](double k) { return std::exp(-g * k); };
    double B = 1.0 - 2.0 * Am(t + 1) - 2.0 * Am(t + 2) +
               (2.0 * A + A * A * (t + 2) - (t + 1)) * Am(2 * t + 4);
    double den = (A * A - 1.0) * (1.0 - Am(t + 1)) * (1.0 - Am(t + 1)) * (1.0 - Am(t + 2)) *
                 (1.0 - Am(t + 2));
    return sigma2 * (1.0 - A) * (1.0 - A) * B / den;
}

} // namespace

SaddleMoments saddle_moments(const ProductionModelSpec& spec, int t) {
    require_gaussian_positive_drift(spec, "saddle_moments");
    if (t < 1) throw rejected_input("saddle_moments: t must be >= 1");
    double g = spec.g;
    double s2 = spec.noise.sigma_a * spec.noise.sigma_a;

    // Z0(i-1)/Z0(t) = (1-e^{-gi}) e^{-g(t+1-i)} / (1-e^{-g(t+1)})
    double denom = -std::expm1(-g * (t + 1));
    double sum_mean = 0.0, sum_var = 0.0;
    for (int i = 1; i <= t; ++i) {
        double ratio = -std::expm1(-g * i) * std::exp(-g * (t + 1 - i)) / denom;
        double r = 1.0 - ratio; // (Z0(t)-Z0(i-1))/Z0(t)
        sum_mean += r - r * r;
        sum_var += r * r;
    }
    double log_z0 = g * (t + 1) + std::log1p(-std::exp(-g * (t + 1))) - std::log(std::expm1(g));

    SaddleMoments m{};
    m.e_logz = log_z0 + 0.5 * s2 * sum_mean;
    m.e_logz_limit = g * (t + 1) - std::log(std::expm1(g)) + s2 / (4.0 * std::sinh(g));
    m.var_logz = s2 * sum_var;
    m.var_logz_limit = s2 * ((2.0 * std::exp(g) + 1.0) / (1.0 - std::exp(2.0 * g)) + t);
    m.var_delta_t = var_delta_finite(g, s2, t);
    m.var_delta_inf = s2 * std::tanh(0.5 * g);
    m.sigma_inf_sq = s2 / std::expm1(2.0 * g);
    return m;
}

DeltaCumulants delta_cumulants(const ProductionModelSpec& spec) {
    require_gaussian_positive_drift(spec, "delta_cumulants");
    double g = spec.g;
    double s = spec.noise.sigma_a;
    double c4_noise = 0.0; // gaussian: all cumulants above the second vanish
    return {0.75 * g * s * s * s * s, (g * g * g / 4.0) * c4_noise};
}

double memoryless_variance(double g, double sigma_a, int t) {
    if (g <= 0.0) throw out_of_regime("memoryless_variance: requires g > 0");
    double A = std::exp(g);
    return sigma_a * sigma_a * (A - 1.0) * (A - 1.0) * (2.0 + A + 2.0 * (A + 1.0) * t) /
           (A * (A + 1.0) * (A + 1.0));
}

double memoryless_slope(double g, double sigma_a) {
    double A = std::exp(g);
    return 2.0 * sigma_a * sigma_a * (A - 1.0) * (A - 1.0) / (A * (A + 1.0));
}

double memoryless_variance_mc(double g, double sigma_a, int t, std::size_t n_paths,
                              std::uint64_t seed) {
    // y_i = g*i + a_i: no accumulation of noise; Delta log Z at time t.
    std::vector<double> delta(n_paths);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (long s = 0; s < static_cast<long>(kShards); ++s) {
        std::size_t lo = static_cast<std::size_t>(s) * n_paths / kShards;
        std::size_t hi = static_cast<std::size_t>(s + 1) * n_paths / kShards;
        Rng rng(Rng::shard_seed(seed, static_cast<std::size_t>(s)));
        for (std::size_t p = lo; p < hi; ++p) {
            // log Z via running log-sum-exp over y_i up to t+1
            double lz_prev = 0.0, lz = 0.0;
            double m = 0.0; // log of running sum, relative tracking
            double acc = 1.0; // sum of e^{y_i - m}
            for (int i = 1; i <= t + 1; ++i) {
                double yi = g * i + sigma_a * rng.normal();
                if (yi > m) {
                    acc = acc * std::exp(m - yi) + 1.0;
                    m = yi;
                } else {
                    acc += std::exp(yi - m);
                }
                if (i == t) lz_prev = m + std::log(acc);
                if (i == t + 1) lz = m + std::log(acc);
            }
            delta[p] = lz - lz_prev;
        }
    }
    double mu = 0.0;
    for (double v : delta) mu += v;
    mu /= static_cast<double>(n_paths);
    double var = 0.0;
    for (double v : delta) var += (v - mu) * (v - mu);
    return var / static_cast<double>(n_paths - 1);
}

double depreciation_volatility(double g, double sigma_a, double d) {
    if (d < 0.0 || d >= 1.0) throw rejected_parameters("depreciation_volatility: d must be in [0,1)");
    double g_tilde = g - std::log1p(-d);
    if (g_tilde <= 0.0) throw out_of_regime("depreciation_volatility: g - ln(1-d) must be > 0");
    return sigma_a * sigma_a * std::tanh(0.5 * g_tilde);
}

double narrow_limit_check(const ProductionModelSpec& spec, int t, const EvolveOptions& opt) {
    PdfState st = initial_state(spec, opt);
    for (int i = 1; i < t; ++i) st = evolve_pdf(st, spec, opt);
    CumulantSet c = delta_cumulants_from_state(st);
    double predicted = std::sqrt(std::tanh(0.5 * spec.g)) * spec.noise.width_scale();
    return std::sqrt(c.c2) / predicted;
}

double zmean_closed_form(const ProductionModelSpec& spec, int t) {
    double x, y;
    spec.noise.exp_moments(x, y);
    double q = std::exp(spec.g) * x;
    return (std::pow(q, t + 1) - 1.0) / (q - 1.0);
}

double zsecond_closed_form(const ProductionModelSpec& spec, int t) {
    double x, y;
    spec.noise.exp_moments(x, y);
    double eg = std::exp(spec.g);
    double a = eg * x;
    double b = eg * y / x;
    double c = eg * eg * y;
    double term1 = 2.0 * (std::pow(a, t + 1) / (a - 1.0)) * ((std::pow(b, t + 1) - 1.0) / (b - 1.0));
    double term2 = ((a + 1.0) / (a - 1.0)) * ((std::pow(c, t + 1) - 1.0) / (c - 1.0));
    return term1 - term2;
}

} // namespace stochlab
