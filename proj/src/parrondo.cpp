#include "stochlab/parrondo.hpp"

#include "stochlab/errors.hpp"
#include "stochlab/rng.hpp"
#include "stochlab/stencil.hpp"
#include "stochlab/threads.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

namespace stochlab {

void GameSpec::validate() const {
    if (m < 1) throw rejected_input("GameSpec: M must be >= 1");
    if (p.size() != static_cast<std::size_t>(m) || q.size() != static_cast<std::size_t>(m))
        throw rejected_input("GameSpec: p and q must have M entries");
    for (int l = 0; l < m; ++l) {
        if (p[l] < 0.0 || q[l] < 0.0 || p[l] + q[l] > 1.0 + 1e-12)
            throw rejected_input("GameSpec: need p_l >= 0, q_l >= 0, p_l + q_l <= 1");
    }
}

bool GameSpec::zero_hold() const {
    for (int l = 0; l < m; ++l)
        if (std::abs(p[l] + q[l] - 1.0) > 1e-12) return false;
    return true;
}

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_array(const std::string& s, const std::string& key) {
    auto open = s.find('[');
    auto close = s.rfind(']');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw rejected_input("game config: expected [..] array for " + key);
    std::string inner = s.substr(open + 1, close - open - 1);
    for (char& c : inner)
        if (c == ',') c = ' ';
    std::istringstream ss(inner);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    return out;
}

} // namespace

GameSpec GameSpec::parse_config(const std::string& text) {
    GameSpec spec;
    bool saw_m = false, saw_p = false, saw_q = false;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw rejected_input("game config: expected key = value at line " + std::to_string(lineno));
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (key == "M") {
            spec.m = std::stoi(val);
            saw_m = true;
        } else if (key == "p") {
            spec.p = parse_array(val, key);
            saw_p = true;
        } else if (key == "q") {
            spec.q = parse_array(val, key);
            saw_q = true;
        } else {
            throw rejected_input("game config: unknown key '" + key + "'");
        }
    }
    if (!saw_m || !saw_p || !saw_q) throw rejected_input("game config: M, p and q are all required");
    spec.validate();
    return spec;
}

std::string GameSpec::to_config() const {
    std::ostringstream os;
    os.precision(17);
    os << "M = " << m << "\np = [";
    for (int l = 0; l < m; ++l) os << (l ? ", " : "") << p[l];
    os << "]\nq = [";
    for (int l = 0; l < m; ++l) os << (l ? ", " : "") << q[l];
    os << "]\n";
    return os.str();
}

void HistoryGameSpec::validate() const {
    for (double v : {p1, p2, p3, p4})
        if (v < 0.0 || v > 1.0) throw rejected_input("HistoryGameSpec: probabilities must be in [0,1]");
}

double LatticeDistribution::at(long n, int l) const {
    if (l < 0 || l >= m) return 0.0;
    long idx = n - n_min;
    if (idx < 0 || idx >= static_cast<long>(cells())) return 0.0;
    return mass[l][static_cast<std::size_t>(idx)];
}

double LatticeDistribution::total() const {
    double s = 0.0;
    for (const auto& rung : mass)
        for (double v : rung) s += v;
    return s;
}

double LatticeDistribution::rung_sum(long n) const {
    double s = 0.0;
    for (int l = 0; l < m; ++l) s += at(n, l);
    return s;
}

long LatticeDistribution::peak_cell() const {
    long best = n_min;
    double bestv = -1.0;
    for (long n = n_min; n <= n_max(); ++n) {
        double v = rung_sum(n);
        if (v > bestv) {
            bestv = v;
            best = n;
        }
    }
    return best;
}

void LatticeDistribution::write_csv(std::ostream& os) const {
    os << "n,l,mass\n";
    os.precision(17);
    for (long n = n_min; n <= n_max(); ++n)
        for (int l = 0; l < m; ++l) os << n << ',' << l << ',' << at(n, l) << '\n';
}

LatticeDistribution delta_start(const GameSpec& spec) {
    spec.validate();
    LatticeDistribution d;
    d.t = 0;
    d.m = spec.m;
    d.n_min = 0;
    d.mass.assign(spec.m, std::vector<double>(1, 0.0));
    d.mass[0][0] = 1.0;
    return d;
}

LatticeDistribution ladder_step(const LatticeDistribution& dist, const GameSpec& spec) {
    spec.validate();
    if (dist.m != spec.m) throw rejected_input("ladder_step: rung count mismatch");
    const int m = spec.m;

    LatticeDistribution next;
    next.t = dist.t + 1;
    next.m = m;
    next.n_min = dist.n_min - 1; // support grows by at most one cell per side
    std::size_t ncells = dist.cells() + 2;
    next.mass.assign(m, std::vector<double>(ncells, 0.0));

    for (int l = 0; l < m; ++l) {
        int lm = (l - 1 + m) % m; // winning at rung lm arrives at l
        int lp = (l + 1) % m;     // losing at rung lp arrives at l
        for (long n = next.n_min; n <= next.n_min + static_cast<long>(ncells) - 1; ++n) {
            long n_hat = (l == 0) ? n - 1 : n;     // wrap up crosses a cell boundary
            long n_bar = (l == m - 1) ? n + 1 : n; // wrap down likewise
            double v = spec.p[lm] * dist.at(n_hat, lm) + spec.q[lp] * dist.at(n_bar, lp) +
                       (1.0 - spec.p[l] - spec.q[l]) * dist.at(n, l);
            next.mass[l][static_cast<std::size_t>(n - next.n_min)] = v;
        }
    }
    double tot = next.total();
    if (std::abs(tot - 1.0) > 1e-12)
        throw numerical_failure("ladder_step: mass drifted to " + std::to_string(tot));
    return next;
}

ComplexMatrix q_matrix(const GameSpec& spec, std::complex<double> kappa) {
    spec.validate();
    const int m = spec.m;
    ComplexMatrix q = ComplexMatrix::Zero(m, m);
    if (m == 1) {
        q(0, 0) = spec.p[0] * std::exp(-kappa) + spec.q[0] * std::exp(kappa) +
                  (1.0 - spec.p[0] - spec.q[0]);
        return q;
    }
    for (int l = 0; l < m; ++l) {
        int lm = (l - 1 + m) % m;
        int lp = (l + 1) % m;
        std::complex<double> up = (l == 0) ? std::exp(-kappa) : 1.0;
        std::complex<double> dn = (l == m - 1) ? std::exp(kappa) : 1.0;
        q(l, lm) += spec.p[lm] * up;
        q(l, lp) += spec.q[lp] * dn;
        q(l, l) += 1.0 - spec.p[l] - spec.q[l];
    }
    return q;
}

namespace {

// d/dkappa and d^2/dkappa^2 of q_matrix at kappa = 0: only the two wrap
// entries carry kappa.
void q_matrix_derivs(const GameSpec& spec, ComplexMatrix& d1, ComplexMatrix& d2) {
    const int m = spec.m;
    d1 = ComplexMatrix::Zero(m, m);
    d2 = ComplexMatrix::Zero(m, m);
    if (m == 1) {
        d1(0, 0) = -spec.p[0] + spec.q[0];
        d2(0, 0) = spec.p[0] + spec.q[0];
        return;
    }
    d1(0, m - 1) = -spec.p[m - 1];
    d2(0, m - 1) = spec.p[m - 1];
    d1(m - 1, 0) = spec.q[0];
    d2(m - 1, 0) = spec.q[0];
}

} // namespace

RateVariance rate_variance(const GameSpec& spec) {
    spec.validate();
    ComplexMatrix q0 = q_matrix(spec, 0.0);
    ComplexMatrix d1, d2;
    q_matrix_derivs(spec, d1, d2);

    EigenLeading lead = eigen_leading(q0);
    EigenDerivatives der = eigen_derivatives(q0, d1, d2);

    RateVariance rv;
    rv.degenerate = lead.degenerate;
    rv.leading_set = lead.leading_set;
    rv.r = -der.d1.real();
    rv.K = der.d2.real();
    rv.var_rate = rv.K - rv.r * rv.r;
    rv.r_capital = spec.m * rv.r;

    // Eq-equivalence triangle: stationary rung average (capital units / M)
    // and boundary flux, against the Hellmann-Feynman value.
    if (spec.m == 1) {
        double x0 = 1.0;
        rv.r_forms = {rv.r, (spec.p[0] - spec.q[0]) * x0, spec.p[0] * x0 - spec.q[0] * x0};
    } else {
        // stationary right eigenvector of the stochastic Q(0)
        ComplexVector x = lead.right;
        std::complex<double> xs = x.sum();
        std::complex<double> avg = 0.0;
        for (int l = 0; l < spec.m; ++l) avg += (spec.p[l] - spec.q[l]) * x[l];
        double r_stationary = (avg / xs).real() / spec.m;
        double r_flux = ((spec.p[spec.m - 1] * x[spec.m - 1] - spec.q[0] * x[0]) / xs).real();
        rv.r_forms = {rv.r, r_stationary, r_flux};
    }
    return rv;
}

GameSpec mix_strategies(const GameSpec& a, const GameSpec& b) {
    a.validate();
    b.validate();
    if (a.m != b.m) throw rejected_input("mix_strategies: periodicity mismatch");
    GameSpec out;
    out.m = a.m;
    out.p.resize(a.m);
    out.q.resize(a.m);
    for (int l = 0; l < a.m; ++l) {
        out.p[l] = 0.5 * (a.p[l] + b.p[l]);
        out.q[l] = 0.5 * (a.q[l] + b.q[l]);
    }
    return out;
}

LatticeDistribution exact_pmf(const GameSpec& spec, int t) {
    spec.validate();
    if (t < 0 || t > 10000) throw rejected_input("exact_pmf: t must be in [0, 1e4]");
    if (t == 0) return delta_start(spec);

    const int m = spec.m;
    const long n_half = (t + m - 1) / m; // support bound in lattice cells
    const long nk = 2 * n_half + 1;      // alias-free momentum count

    // W[k] = column 0 of Q(i k)^t (delta initial condition at n=0, l=0)
    std::vector<ComplexVector> w(static_cast<std::size_t>(nk));
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long mi = 0; mi < nk; ++mi) {
        double k = 2.0 * M_PI * static_cast<double>(mi) / static_cast<double>(nk);
        ComplexMatrix q = q_matrix(spec, std::complex<double>(0.0, k));
        // binary exponentiation of the transfer matrix
        ComplexMatrix acc = ComplexMatrix::Identity(m, m);
        ComplexMatrix base = q;
        int e = t;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        w[static_cast<std::size_t>(mi)] = acc.col(0);
    }

    LatticeDistribution out;
    out.t = t;
    out.m = m;
    out.n_min = -n_half;
    out.mass.assign(m, std::vector<double>(static_cast<std::size_t>(nk), 0.0));
    for (long n = -n_half; n <= n_half; ++n) {
        for (int l = 0; l < m; ++l) {
            std::complex<double> s = 0.0;
            for (long mi = 0; mi < nk; ++mi) {
                // reduce the phase index exactly before going to radians
                long red = ((mi * n) % nk + nk) % nk;
                double ang = 2.0 * M_PI * static_cast<double>(red) / static_cast<double>(nk);
                s += std::complex<double>(std::cos(ang), std::sin(ang)) *
                     w[static_cast<std::size_t>(mi)][l];
            }
            double v = s.real() / static_cast<double>(nk);
            out.mass[l][static_cast<std::size_t>(n + n_half)] = v < 0.0 ? 0.0 : v;
        }
    }
    // normalization fixed so total mass is exactly 1
    double tot = out.total();
    for (auto& rung : out.mass)
        for (double& v : rung) v /= tot;
    return out;
}

namespace {

// Leading eigenvalue of the real transfer matrix at real kappa.
double lambda_real(const GameSpec& spec, double kappa) {
    if (spec.m == 1)
        return spec.p[0] * std::exp(-kappa) + spec.q[0] * std::exp(kappa) +
               (1.0 - spec.p[0] - spec.q[0]);
    EigenLeading lead = eigen_leading(q_matrix(spec, kappa));
    // Perron root of a non-negative matrix: real and positive
    return std::abs(lead.value);
}

double v_of(const GameSpec& spec, double kappa) { return std::log(lambda_real(spec, kappa)); }

// dV/dkappa: analytic for M = 1, stencil on the eigenvalue branch otherwise.
double v_prime(const GameSpec& spec, double kappa) {
    if (spec.m == 1) {
        double lam = lambda_real(spec, kappa);
        double d = -spec.p[0] * std::exp(-kappa) + spec.q[0] * std::exp(kappa);
        return d / lam;
    }
    return deriv1([&](double k) { return v_of(spec, k); }, kappa);
}

double v_second(const GameSpec& spec, double kappa) {
    if (spec.m == 1) {
        double lam = lambda_real(spec, kappa);
        double d1 = -spec.p[0] * std::exp(-kappa) + spec.q[0] * std::exp(kappa);
        double d2 = spec.p[0] * std::exp(-kappa) + spec.q[0] * std::exp(kappa);
        return d2 / lam - (d1 / lam) * (d1 / lam);
    }
    return deriv2([&](double k) { return v_of(spec, k); }, kappa);
}

} // namespace

AsymptoticPoint asymptotic_point(const GameSpec& spec, double x, int t) {
    spec.validate();
    // Solve x = -V'(kappa) by bisection + Newton; -V' is decreasing in kappa.
    double lo = -40.0, hi = 40.0;
    double flo = -v_prime(spec, lo), fhi = -v_prime(spec, hi);
    if (!(x <= flo && x >= fhi))
        throw out_of_support("asymptotic_point: x outside the achievable rate interval");
    double kappa = 0.0;
    for (int it = 0; it < 200; ++it) {
        double fmid = -v_prime(spec, kappa);
        double err = fmid - x;
        if (std::abs(err) < 1e-12) break;
        if (err > 0.0)
            lo = kappa;
        else
            hi = kappa;
        double v2 = v_second(spec, kappa);
        double newton = (v2 > 1e-14) ? kappa + err / v2 : 0.5 * (lo + hi);
        kappa = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    AsymptoticPoint pt;
    pt.x = x;
    pt.kappa = kappa;
    pt.u = v_of(spec, kappa) + kappa * x;
    pt.v2 = v_second(spec, kappa);
    pt.body = std::exp(static_cast<double>(t) * pt.u) / std::sqrt(2.0 * M_PI * t * pt.v2);
    return pt;
}

bool parity_allowed(const GameSpec& spec, long n, int l, int t) {
    if (!spec.zero_hold()) return true;
    long s = static_cast<long>(l) + n * spec.m + t;
    return (s % 2 + 2) % 2 == 0;
}

double asymptotic_pmf_value(const GameSpec& spec, long n, int t) {
    spec.validate();
    double x = static_cast<double>(n) / static_cast<double>(t);
    AsymptoticPoint pt = asymptotic_point(spec, x, t);
    if (!spec.zero_hold()) return pt.body;

    // With zero hold the -1 partner of the stochastic eigenvalue survives and
    // carries an oscillation. For the delta initial condition the projection
    // coefficients are equal (alpha = beta), and the summed-over-rungs factor
    // is 1 + (-1)^{n+t} * sum_l (-1)^l v_l / sum_l v_l for odd M while the
    // alternating sum cancels exactly for even M.
    EigenLeading lead = eigen_leading(q_matrix(spec, 0.0));
    ComplexVector v = lead.right;
    double vsum = 0.0, valt = 0.0;
    for (int l = 0; l < spec.m; ++l) {
        vsum += v[l].real();
        valt += (l % 2 == 0 ? 1.0 : -1.0) * v[l].real();
    }
    double osc = 0.0;
    if (spec.m % 2 == 1) {
        double sign = ((n + t) % 2 + 2) % 2 == 0 ? 1.0 : -1.0;
        osc = sign * valt / vsum;
    }
    return pt.body * (1.0 + osc);
}

RateVariance history_rate_variance(const HistoryGameSpec& spec) {
    spec.validate();
    auto build = [&](int order) {
        ComplexMatrix a = ComplexMatrix::Zero(4, 4);
        // e^{kappa} entries (losses), derivative factor +1
        double lose_sign = 1.0;
        double win_sign = order % 2 == 0 ? 1.0 : -1.0; // e^{-kappa} entries
        (void)lose_sign;
        a(0, 0) = (1.0 - spec.p1);
        a(0, 2) = (1.0 - spec.p3);
        a(2, 1) = (1.0 - spec.p2);
        a(2, 3) = (1.0 - spec.p4);
        a(1, 0) = win_sign * spec.p1;
        a(1, 2) = win_sign * spec.p3;
        a(3, 1) = win_sign * spec.p2;
        a(3, 3) = win_sign * spec.p4;
        return a;
    };
    ComplexMatrix q0 = build(0);
    ComplexMatrix d1 = build(1);
    ComplexMatrix d2 = build(2);

    EigenLeading lead = eigen_leading(q0);
    EigenDerivatives der = eigen_derivatives(q0, d1, d2);

    RateVariance rv;
    rv.degenerate = lead.degenerate;
    rv.leading_set = lead.leading_set;
    rv.r = -der.d1.real();
    rv.K = der.d2.real();
    rv.var_rate = rv.K - rv.r * rv.r;
    rv.r_capital = rv.r; // capital units already
    rv.r_forms = {rv.r, rv.r, rv.r};
    return rv;
}

double history_walk_mc(const HistoryGameSpec& spec, long steps, std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    long x = 0;
    int last = 1, second = 1; // start from (+,+); burn-in washes it out
    for (long i = 0; i < steps; ++i) {
        double pr;
        if (last == 0 && second == 0)
            pr = spec.p1;
        else if (last == 0 && second == 1)
            pr = spec.p2;
        else if (last == 1 && second == 0)
            pr = spec.p3;
        else
            pr = spec.p4;
        int win = rng.uniform01() < pr ? 1 : 0;
        x += win ? 1 : -1;
        second = last;
        last = win;
    }
    return static_cast<double>(x) / static_cast<double>(steps);
}

} // namespace stochlab
