#pragma once

#include "stochlab/grid_pdf.hpp"
#include "stochlab/rng.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace stochlab {

enum class NoiseKind { gaussian, lorentzian, custom };

// The i.i.d. per-period noise law. The Lorentzian is truncated at
// +-cut*gamma and renormalized so grid and sampler describe the same law;
// the discarded tail mass is available from tail_mass().
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma_a = 0.0; // gaussian
    double gamma = 0.0;   // lorentzian width
    double cut = 50.0;    // lorentzian truncation in units of gamma
    GridPdf custom;

    static NoiseSpec gaussian_noise(double sigma);
    static NoiseSpec lorentzian_noise(double gamma, double cut = 50.0);
    static NoiseSpec custom_noise(GridPdf pdf);

    GridPdf density(double dx) const;   // law on a grid
    GridPdf mirrored_density(double dx) const; // law of -a
    double sample(Rng& rng) const;
    double tail_mass() const;           // mass removed by lorentzian truncation
    double width_scale() const;         // sigma, gamma, or custom std
    // <e^a> and <e^{2a}>, used by the closed-form moment cross-checks.
    void exp_moments(double& x, double& y) const;
};

struct ProductionModelSpec {
    double g = 0.0;      // drift per period
    NoiseSpec noise;
    double d = 0.0;      // geometric depreciation rate, 0 for the plain model
};

// ---- Monte-Carlo route ----------------------------------------------------

struct PathEnsemble {
    // requested time -> samples across paths
    std::map<int, std::vector<double>> logz;
    std::map<int, std::vector<double>> dlogz; // log Z_t - log Z_{t-1}
};

// Z_t = sum_{j<=t} e^{gj} e^{a_1}..e^{a_j}, Z_0 = 1, tracked in log space so
// arbitrarily long horizons cannot overflow. Deterministic under seed: paths
// are sharded into 512 fixed blocks regardless of thread count.
PathEnsemble simulate_paths(const ProductionModelSpec& spec, int t_max, std::size_t n_paths,
                            std::uint64_t seed, const std::vector<int>& record_times = {},
                            bool parallel = true);

// ---- Exact distribution route ---------------------------------------------

struct EvolveOptions {
    double dx = 0.0;          // 0 = auto: min(0.005, width_scale/16)
    double trim_tail = 1e-12; // per-side cumulative mass trimmed after a step
    double domain_cap = 0.0;  // optional |x| cap; 0 = unlimited (auto-extend)
};

// Distributions of z_t = log Z_t and of y_t = log Y_t (the sign-flipped
// recursion feeding the volatility law). Both normalized; z is supported on
// x > 0.
struct PdfState {
    int t = 0;
    GridPdf rho_z;
    GridPdf rho_y;
};

// State at t=1 built by the exact deterministic map of the t=0 delta.
PdfState initial_state(const ProductionModelSpec& spec, const EvolveOptions& opt = {});

// One recursion step for both branches.
PdfState evolve_pdf(const PdfState& state, const ProductionModelSpec& spec,
                    const EvolveOptions& opt = {});

// Density of the one-step increment Delta log Z at the state's time, obtained
// from rho_y by the exact change of variables (integrable singularity at 0).
GridPdf volatility_pdf(const PdfState& state);

// Moments of Delta log Z computed by quadrature directly on the y-grid
// (same law as volatility_pdf without the singular re-gridding).
CumulantSet delta_cumulants_from_state(const PdfState& state);

// ---- Closed forms (gaussian noise, g > 0) ----------------------------------

struct SaddleMoments {
    double e_logz;         // E log Z_t, finite-t sum
    double e_logz_limit;   // large-t asymptote
    double var_logz;       // Var log Z_t, finite-t sum
    double var_logz_limit; // large-t asymptote
    double var_delta_t;    // Var(Delta log Z) at finite t
    double var_delta_inf;  // sigma_a^2 tanh(g/2)
    double sigma_inf_sq;   // stationary variance of y: sigma_a^2/(e^{2g}-1)
};
SaddleMoments saddle_moments(const ProductionModelSpec& spec, int t);

// Narrow-noise skew/kurtosis closed forms; c4 of the noise is measured from
// the NoiseSpec rather than assumed.
struct DeltaCumulants {
    double c3;
    double c4;
};
DeltaCumulants delta_cumulants(const ProductionModelSpec& spec);

// Trend-stationary variant (noise memory removed): Var(Delta log Z) grows
// linearly in t.
double memoryless_variance(double g, double sigma_a, int t);
double memoryless_slope(double g, double sigma_a);
// Monte-Carlo of the memoryless model for cross-checks.
double memoryless_variance_mc(double g, double sigma_a, int t, std::size_t n_paths,
                              std::uint64_t seed);

// Volatility with geometric depreciation d: sigma_a^2 tanh(g_tilde/2),
// g_tilde = g - ln(1-d). d=0 reduces to the plain law.
double depreciation_volatility(double g, double sigma_a, double d);

// Ratio of the recursion-based std of Delta log Z to sqrt(tanh(g/2))*sigma_a.
double narrow_limit_check(const ProductionModelSpec& spec, int t, const EvolveOptions& opt = {});

// <Z_t> and <Z_t^2> closed forms from <e^a>, <e^{2a}> (cross-checks on MC).
double zmean_closed_form(const ProductionModelSpec& spec, int t);
double zsecond_closed_form(const ProductionModelSpec& spec, int t);

} // namespace stochlab
