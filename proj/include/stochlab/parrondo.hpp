#pragma once

#include "stochlab/linalg.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stochlab {

// Capital-dependent game with periodicity M: p[l]/q[l] are the win/lose
// probabilities at rung l = Mod(X, M); 1-p-q holds the capital.
struct GameSpec {
    int m = 1;
    std::vector<double> p;
    std::vector<double> q;

    void validate() const;
    bool zero_hold() const; // p_l + q_l == 1 for all rungs

    // Flat TOML-style config: `M = 3`, `p = [...]`, `q = [...]`.
    static GameSpec parse_config(const std::string& text);
    std::string to_config() const;
};

// Right-jump probabilities conditioned on the last two outcomes
// (-,-), (-,+), (+,-), (+,+).
struct HistoryGameSpec {
    double p1, p2, p3, p4;
    void validate() const;
};

// Probability masses P_l(n, t) on lattice cells n (one cell = M capital
// units) and rungs l.
struct LatticeDistribution {
    int t = 0;
    int m = 1;
    long n_min = 0;
    std::vector<std::vector<double>> mass; // [rung][cell]

    std::size_t cells() const { return mass.empty() ? 0 : mass[0].size(); }
    long n_max() const { return n_min + static_cast<long>(cells()) - 1; }
    double at(long n, int l) const;
    double total() const;
    // Distribution summed over rungs at cell n.
    double rung_sum(long n) const;
    // argmax of the rung-summed distribution.
    long peak_cell() const;
    void write_csv(std::ostream& os) const; // header n,l,mass
};

LatticeDistribution delta_start(const GameSpec& spec); // mass 1 at n=0, l=0

// One master-equation step (the chain is the M=1 case of the ladder).
LatticeDistribution ladder_step(const LatticeDistribution& dist, const GameSpec& spec);
inline LatticeDistribution chain_step(const LatticeDistribution& d, const GameSpec& s) {
    return ladder_step(d, s);
}

// Momentum-space transfer matrix Q(kappa); Q(0) is column-stochastic.
ComplexMatrix q_matrix(const GameSpec& spec, std::complex<double> kappa);

struct RateVariance {
    double r = 0.0;         // lattice drift per step, -lambda'(0)
    double K = 0.0;         // lambda''(0), curvature of the leading eigenvalue
    double var_rate = 0.0;  // (ln lambda)''(0) = K - r^2; Var(n)/t asymptote
    double r_capital = 0.0; // M * r
    bool degenerate = false;
    std::vector<std::complex<double>> leading_set;
    // The three equivalent drift formulas (eigenvalue derivative, stationary
    // average over rungs, boundary flux), all in lattice units.
    std::array<double, 3> r_forms{};
};

// Growth rate and variance from exact first/second eigenvalue perturbation
// theory at kappa = 0 (no finite differences).
RateVariance rate_variance(const GameSpec& spec);

// Random mixture of two same-M games: componentwise mean of (p, q).
GameSpec mix_strategies(const GameSpec& a, const GameSpec& b);

// Exact finite-time distribution by sampling the transfer matrix on
// 2*ceil(t/M)+1 lattice momenta and inverting the discrete transform;
// normalization is fixed so that total mass is exactly 1.
LatticeDistribution exact_pmf(const GameSpec& spec, int t);

// Large-deviation machinery for the rung-summed profile.
struct AsymptoticPoint {
    double x;      // lattice velocity n/t
    double kappa;  // saddle point solving x = -V'(kappa)
    double u;      // rate function value V(kappa) + kappa x (<= 0, 0 at x=r)
    double v2;     // V''(kappa)
    double body;   // exp(t u)/sqrt(2 pi t v2), the smooth profile factor
};
AsymptoticPoint asymptotic_point(const GameSpec& spec, double x, int t);

// Rung-summed asymptotic value at lattice cell n including the parity
// oscillation carried by the -1 eigenvalue partner (delta initial condition
// at n=l=0; alpha and beta are solved from the t=0 and t=1 distributions).
double asymptotic_pmf_value(const GameSpec& spec, long n, int t);

// Parity support law: with zero hold everywhere, P_l(n,t) = 0 whenever
// l + n*M + t is odd.
bool parity_allowed(const GameSpec& spec, long n, int l, int t);

RateVariance history_rate_variance(const HistoryGameSpec& spec);

// Monte-Carlo of the history walk (capital units); returns sample mean drift.
double history_walk_mc(const HistoryGameSpec& spec, long steps, std::uint64_t seed);

} // namespace stochlab
