#include "stochlab/infotheory.hpp"

#include "stochlab/errors.hpp"
#include "stochlab/rng.hpp"
#include "stochlab/special.hpp"
#include "stochlab/threads.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace stochlab {

PairedSamples::PairedSamples(std::vector<double> xs, std::vector<double> ys)
    : x(std::move(xs)), y(std::move(ys)) {
    if (x.size() != y.size()) throw rejected_input("PairedSamples: length mismatch");
    if (x.size() < 2) throw rejected_input("PairedSamples: need N >= 2");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw rejected_input("PairedSamples: non-finite value at row " + std::to_string(i));
}

PairedSamples PairedSamples::read_csv(std::istream& is, bool header) {
    std::string line;
    std::vector<double> xs, ys;
    std::size_t lineno = 0;
    if (header) {
        std::getline(is, line);
        ++lineno;
    }
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double a, b;
        char comma;
        if (!(ss >> a >> comma >> b))
            throw io_error("paired csv: parse failure at line " + std::to_string(lineno));
        xs.push_back(a);
        ys.push_back(b);
    }
    return PairedSamples(std::move(xs), std::move(ys));
}

void PairedSamples::write_csv(std::ostream& os) const {
    os << "x,y\n";
    os.precision(17);
    for (std::size_t i = 0; i < x.size(); ++i) os << x[i] << ',' << y[i] << '\n';
}

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double pearson_raw(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = mean_of(a), mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) throw undefined_correlation("pearson: zero variance margin");
    return sab / std::sqrt(saa * sbb);
}

} // namespace

double pearson(const PairedSamples& s) { return pearson_raw(s.x, s.y); }

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + j) + 1.0; // 1-based average rank
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

double spearman(const PairedSamples& s) { return pearson_raw(ranks(s.x), ranks(s.y)); }

double autocorrelation(const std::vector<double>& series, int lag) {
    if (lag < 0 || static_cast<std::size_t>(lag) >= series.size())
        throw rejected_input("autocorrelation: need 0 <= lag < length");
    double mu = mean_of(series);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double d = series[i] - mu;
        den += d * d;
        if (i + static_cast<std::size_t>(lag) < series.size())
            num += d * (series[i + lag] - mu);
    }
    if (den <= 0.0) throw undefined_correlation("autocorrelation: zero variance");
    return num / den;
}

DiscreteJoint::DiscreteJoint(std::size_t i, std::size_t j) : ni(i), nj(j), p(i * j, 0.0) {
    if (i == 0 || j == 0) throw rejected_input("DiscreteJoint: empty support");
}

void DiscreteJoint::validate(double tol) const {
    double s = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v)) throw rejected_input("DiscreteJoint: negative probability");
        s += v;
    }
    if (std::abs(s - 1.0) > tol) throw rejected_input("DiscreteJoint: probabilities sum to " + std::to_string(s));
}

std::vector<double> DiscreteJoint::marginal_x() const {
    std::vector<double> m(ni, 0.0);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) m[i] += at(i, j);
    return m;
}

std::vector<double> DiscreteJoint::marginal_y() const {
    std::vector<double> m(nj, 0.0);
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) m[j] += at(i, j);
    return m;
}

DiscreteJoint3::DiscreteJoint3(std::size_t i, std::size_t j, std::size_t k)
    : ni(i), nj(j), nk(k), p(i * j * k, 0.0) {
    if (i == 0 || j == 0 || k == 0) throw rejected_input("DiscreteJoint3: empty support");
}

void DiscreteJoint3::validate(double tol) const {
    double s = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v)) throw rejected_input("DiscreteJoint3: negative probability");
        s += v;
    }
    if (std::abs(s - 1.0) > tol) throw rejected_input("DiscreteJoint3: probabilities sum to " + std::to_string(s));
}

namespace {

inline double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double entropy_of(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p) h -= xlogx(v);
    return h;
}

} // namespace

InformationMeasures information_measures(const DiscreteJoint& j) {
    j.validate();
    auto px = j.marginal_x();
    auto py = j.marginal_y();
    double hx = entropy_of(px);
    double hy = entropy_of(py);
    double hxy = entropy_of(j.p);
    double mi = 0.0;
    for (std::size_t a = 0; a < j.ni; ++a)
        for (std::size_t b = 0; b < j.nj; ++b) {
            double v = j.at(a, b);
            if (v > 0.0) mi += v * std::log(v / (px[a] * py[b]));
        }
    return {hx, hy, hxy, hxy - hy, mi};
}

double kl_divergence(const DiscreteJoint& p, const DiscreteJoint& q) {
    p.validate();
    q.validate();
    if (p.ni != q.ni || p.nj != q.nj) throw rejected_input("kl_divergence: support mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) {
        if (p.p[i] == 0.0) continue;
        if (q.p[i] == 0.0) throw rejected_input("kl_divergence: q vanishes where p does not");
        d += p.p[i] * std::log(p.p[i] / q.p[i]);
    }
    return d;
}

double conditional_mutual_information(const DiscreteJoint3& j) {
    j.validate();
    // I(X;Y|Z) = sum_z p(z) * I(X;Y | Z=z)
    double cmi = 0.0;
    for (std::size_t z = 0; z < j.nk; ++z) {
        double pz = 0.0;
        for (std::size_t a = 0; a < j.ni; ++a)
            for (std::size_t b = 0; b < j.nj; ++b) pz += j.at(a, b, z);
        if (pz == 0.0) continue;
        std::vector<double> pxz(j.ni, 0.0), pyz(j.nj, 0.0);
        for (std::size_t a = 0; a < j.ni; ++a)
            for (std::size_t b = 0; b < j.nj; ++b) {
                pxz[a] += j.at(a, b, z);
                pyz[b] += j.at(a, b, z);
            }
        for (std::size_t a = 0; a < j.ni; ++a)
            for (std::size_t b = 0; b < j.nj; ++b) {
                double v = j.at(a, b, z);
                if (v > 0.0) cmi += v * std::log(v * pz / (pxz[a] * pyz[b]));
            }
    }
    return cmi;
}

double nats_to_bits(double nats) { return nats / std::log(2.0); }

std::string MiEstimate::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["method"] = method;
    j["params"] = param;
    j["N"] = n;
    return j.dump();
}

namespace {

std::vector<std::size_t> bin_indices(const std::vector<double>& v, int bins) {
    auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    double mn = *mn_it, mx = *mx_it;
    if (mx <= mn) throw rejected_input("mi_histogram: degenerate margin (min == max)");
    double w = (mx - mn) / static_cast<double>(bins);
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto b = static_cast<long>((v[i] - mn) / w);
        if (b >= bins) b = bins - 1; // the max lands in the top bin
        if (b < 0) b = 0;
        idx[i] = static_cast<std::size_t>(b);
    }
    return idx;
}

} // namespace

DiscreteJoint histogram_joint(const PairedSamples& s, int bins) {
    if (bins < 2) throw rejected_input("mi_histogram: bins must be >= 2");
    auto bx = bin_indices(s.x, bins);
    auto by = bin_indices(s.y, bins);
    DiscreteJoint j(static_cast<std::size_t>(bins), static_cast<std::size_t>(bins));
    double w = 1.0 / static_cast<double>(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) j.at(bx[i], by[i]) += w;
    return j;
}

MiEstimate mi_histogram(const PairedSamples& s, int bins) {
    DiscreteJoint j = histogram_joint(s, bins);
    return {information_measures(j).mutual_information, "histogram", bins, s.size()};
}

namespace {

// Deterministic tie-breaking jitter; magnitude 1e-10 of the data range.
void add_jitter(std::vector<double>& v, std::uint64_t salt) {
    auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    double range = *mx - *mn;
    if (range <= 0.0) range = 1.0;
    Rng rng(0x5713A9F0u ^ salt);
    for (double& x : v) x += 1e-10 * range * (rng.uniform01() - 0.5);
}

} // namespace

namespace {

// Per-point digamma contribution; shared by the serial and OpenMP drivers so
// both produce bitwise-identical sums (per-i buffer, fixed summation order).
double knn_point_psi(const std::vector<double>& x, const std::vector<double>& y, long i, int k,
                     int algorithm) {
    const auto nn = static_cast<long>(x.size());
    std::vector<double> dj;
    dj.reserve(x.size() - 1);
    for (long j = 0; j < nn; ++j) {
        if (j == i) continue;
        dj.push_back(std::max(std::abs(x[i] - x[j]), std::abs(y[i] - y[j])));
    }
    std::nth_element(dj.begin(), dj.begin() + (k - 1), dj.end());
    double eps_half = dj[k - 1]; // = eps(i)/2, distance to the Kth neighbor

    if (algorithm == 1) {
        long cx = 0, cy = 0;
        for (long j = 0; j < nn; ++j) {
            if (j == i) continue;
            if (std::abs(x[i] - x[j]) < eps_half) ++cx;
            if (std::abs(y[i] - y[j]) < eps_half) ++cy;
        }
        return digamma(static_cast<double>(cx + 1)) + digamma(static_cast<double>(cy + 1));
    }
    // algorithm 2: projected radii of the K joint-space neighbors
    double ex = 0.0, ey = 0.0;
    for (long j = 0; j < nn; ++j) {
        if (j == i) continue;
        double dx = std::abs(x[i] - x[j]);
        double dy = std::abs(y[i] - y[j]);
        if (std::max(dx, dy) <= eps_half) {
            ex = std::max(ex, dx);
            ey = std::max(ey, dy);
        }
    }
    long cx = 0, cy = 0;
    for (long j = 0; j < nn; ++j) {
        if (j == i) continue;
        if (std::abs(x[i] - x[j]) <= ex) ++cx;
        if (std::abs(y[i] - y[j]) <= ey) ++cy;
    }
    return digamma(static_cast<double>(cx)) + digamma(static_cast<double>(cy));
}

MiEstimate mi_knn_impl(const PairedSamples& s, int k, int algorithm, bool parallel) {
    if (k < 1) throw rejected_input("mi_knn: K must be >= 1");
    if (algorithm != 1 && algorithm != 2) throw rejected_input("mi_knn: algorithm must be 1 or 2");
    const auto n = s.size();
    if (n <= static_cast<std::size_t>(k) + 1) throw rejected_input("mi_knn: need N > K+1");

    std::vector<double> x = s.x, y = s.y;
    add_jitter(x, n);
    add_jitter(y, n * 2654435761u);

    const auto nn = static_cast<long>(n);
    std::vector<double> psi(n);
    if (parallel) {
#pragma omp parallel for schedule(static) num_threads(max_threads())
        for (long i = 0; i < nn; ++i) psi[i] = knn_point_psi(x, y, i, k, algorithm);
    } else {
        for (long i = 0; i < nn; ++i) psi[i] = knn_point_psi(x, y, i, k, algorithm);
    }
    double sum_psi = 0.0;
    for (double v : psi) sum_psi += v;

    double nd = static_cast<double>(n);
    double value;
    if (algorithm == 1)
        value = digamma(k) - sum_psi / nd + digamma(nd);
    else
        value = digamma(k) - 1.0 / k - sum_psi / nd + digamma(nd);
    return {value, algorithm == 1 ? "knn1" : "knn2", k, n};
}

} // namespace

MiEstimate mi_knn(const PairedSamples& s, int k, int algorithm) {
    return mi_knn_impl(s, k, algorithm, true);
}

MiEstimate mi_knn_serial(const PairedSamples& s, int k, int algorithm) {
    return mi_knn_impl(s, k, algorithm, false);
}

double gaussian_mi(double a) {
    if (!(std::abs(a) < 1.0))
        throw rejected_input("gaussian_mi: diverges for |a| >= 1");
    return -0.5 * std::log1p(-a * a);
}

PairedSamples ar1_generate(double a, double c, double sigma, std::size_t n, std::uint64_t seed) {
    if (!(std::abs(a) < 1.0)) throw rejected_input("ar1_generate: |a| < 1 required for stationarity");
    if (n < 2) throw rejected_input("ar1_generate: need N >= 2");
    Rng rng(seed);
    double mu = c / (1.0 - a);
    double sd_stat = sigma / std::sqrt(1.0 - a * a);
    std::vector<double> x(n), y(n);
    double prev = (sigma > 0.0) ? rng.normal(mu, sd_stat) : mu;
    for (std::size_t t = 0; t < n; ++t) {
        double cur = c + a * prev + sigma * rng.normal();
        x[t] = cur;
        y[t] = a * prev;
        prev = cur;
    }
    return PairedSamples(std::move(x), std::move(y));
}

} // namespace stochlab
