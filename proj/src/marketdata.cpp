#include "stochlab/marketdata.hpp"

#include "stochlab/errors.hpp"
#include "stochlab/infotheory.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stochlab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_price(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

} // namespace

OhlcSeries load_ohlc(std::istream& is, const OhlcLoadOptions& opt) {
    OhlcSeries series;
    std::string line;
    std::size_t lineno = 0;
    int maxcol = *std::max_element(opt.columns.begin(), opt.columns.end());

    if (opt.header) {
        if (!std::getline(is, line)) throw io_error("ohlc csv: empty file");
        ++lineno;
    }
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) <= maxcol)
            throw io_error("ohlc csv: too few columns at line " + std::to_string(lineno));
        OhlcRecord rec;
        rec.date = cells[opt.columns[0]];
        double open, close;
        bool ok = parse_price(cells[opt.columns[1]], open) && parse_price(cells[opt.columns[4]], close);
        if (!ok || open <= 0.0 || close <= 0.0) {
            ++series.dropped_rows;
            continue;
        }
        rec.open = open;
        rec.close = close;
        if (!series.days.empty() && !(series.days.back().date < rec.date))
            throw io_error("ohlc csv: dates not strictly increasing at line " + std::to_string(lineno));
        series.days.push_back(std::move(rec));
    }
    if (series.days.size() < 2) throw insufficient_data("ohlc csv: fewer than 2 usable rows");

    // Flag |close-to-close log-return| > 5 sigma; the paper's policy is to
    // keep such days (stock splits, crashes) unless explicitly dropped.
    std::vector<double> r(series.days.size() - 1);
    for (std::size_t k = 1; k < series.days.size(); ++k)
        r[k - 1] = std::log(series.days[k].close / series.days[k - 1].close);
    double mu = 0.0;
    for (double v : r) mu += v;
    mu /= static_cast<double>(r.size());
    double var = 0.0;
    for (double v : r) var += (v - mu) * (v - mu);
    var /= static_cast<double>(r.size());
    double sd = std::sqrt(var);
    if (sd > 0.0) {
        for (std::size_t k = 1; k < series.days.size(); ++k)
            if (std::abs(r[k - 1] - mu) > 5.0 * sd) series.outlier_days.push_back(k);
    }
    if (opt.drop_outliers && !series.outlier_days.empty()) {
        std::vector<OhlcRecord> kept;
        std::size_t oi = 0;
        for (std::size_t k = 0; k < series.days.size(); ++k) {
            if (oi < series.outlier_days.size() && series.outlier_days[oi] == k) {
                ++oi;
                ++series.dropped_rows;
                continue;
            }
            kept.push_back(series.days[k]);
        }
        series.days = std::move(kept);
        series.outlier_days.clear();
    }
    return series;
}

OhlcSeries load_ohlc_file(const std::string& path, const OhlcLoadOptions& opt) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open " + path);
    return load_ohlc(f, opt);
}

SessionReturns session_returns(const OhlcSeries& s) {
    if (s.days.size() < 2) throw insufficient_data("session_returns: need at least 2 days");
    SessionReturns sr;
    sr.d.reserve(s.days.size() - 1);
    sr.n.reserve(s.days.size() - 1);
    for (std::size_t k = 1; k < s.days.size(); ++k) {
        sr.d.push_back(std::log(s.days[k].close / s.days[k].open));
        sr.n.push_back(std::log(s.days[k].open / s.days[k - 1].close));
    }
    return sr;
}

namespace {

std::vector<double> abs_of(const std::vector<double>& v, std::size_t from, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = std::abs(v[from + i]);
    return out;
}

double correlate(const std::vector<double>& a, const std::vector<double>& b, AsymmetryMethod m,
                 int knn_k) {
    PairedSamples s(a, b);
    switch (m) {
        case AsymmetryMethod::pearson: return pearson(s);
        case AsymmetryMethod::spearman: return spearman(s);
        case AsymmetryMethod::mi_knn: return mi_knn(s, knn_k, 2).value;
    }
    throw rejected_parameters("asymmetry: unknown method");
}

const char* method_name(AsymmetryMethod m) {
    switch (m) {
        case AsymmetryMethod::pearson: return "pearson";
        case AsymmetryMethod::spearman: return "spearman";
        case AsymmetryMethod::mi_knn: return "mi_knn";
    }
    return "?";
}

} // namespace

AsymmetryReport asymmetry(const SessionReturns& sr, const std::vector<AsymmetryMethod>& methods,
                          int knn_k) {
    const std::size_t n = sr.d.size();
    if (n < 30) throw rejected_parameters("asymmetry: need at least 30 aligned days");

    AsymmetryReport report;
    for (auto m : methods) {
        if (m == AsymmetryMethod::mi_knn && n < static_cast<std::size_t>(3 * knn_k))
            throw rejected_parameters("asymmetry: MI needs N >= 3K");

        // C_nd pairs day k with the night leading into it; C_dn with the
        // night that follows (one fewer pair).
        auto vd = abs_of(sr.d, 0, n);
        auto vn = abs_of(sr.n, 0, n);
        double c_nd = correlate(vd, vn, m, knn_k);

        auto vd_head = abs_of(sr.d, 0, n - 1);
        auto vn_next = abs_of(sr.n, 1, n - 1);
        double c_dn = correlate(vd_head, vn_next, m, knn_k);

        AsymmetryEntry e{method_name(m), c_nd, c_dn, std::nullopt};
        if (m == AsymmetryMethod::mi_knn) {
            if (c_nd > 0.0 && c_dn > 0.0) e.ratio = c_nd / c_dn;
        } else if (c_dn != 0.0) {
            e.ratio = c_nd / c_dn;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

std::string AsymmetryReport::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json je;
        je["method"] = e.method;
        je["C_nd"] = e.c_nd;
        je["C_dn"] = e.c_dn;
        if (e.ratio)
            je["ratio"] = *e.ratio;
        else
            je["ratio"] = nullptr;
        j.push_back(je);
    }
    return j.dump(2);
}

std::string AsymmetryReport::csv_header(const std::vector<AsymmetryEntry>& entries) {
    std::string h = "equity";
    for (const auto& e : entries)
        h += "," + e.method + "_nd," + e.method + "_dn," + e.method + "_ratio";
    return h;
}

std::string AsymmetryReport::to_csv_row(const std::string& label) const {
    std::ostringstream os;
    os.precision(12);
    os << label;
    for (const auto& e : entries) {
        os << ',' << e.c_nd << ',' << e.c_dn << ',';
        if (e.ratio)
            os << *e.ratio;
        else
            os << "nan";
    }
    return os.str();
}

std::vector<double> rolling_volatility(const std::vector<double>& returns, int n) {
    if (n < 2) throw rejected_parameters("rolling_volatility: window must be >= 2");
    if (returns.size() < static_cast<std::size_t>(n))
        throw rejected_parameters("rolling_volatility: series shorter than window");
    const double annualize = std::sqrt(252.0) * 100.0;
    std::vector<double> out;
    out.reserve(returns.size() - n + 1);
    for (std::size_t k = static_cast<std::size_t>(n) - 1; k < returns.size(); ++k) {
        double mu = 0.0;
        for (int i = 0; i < n; ++i) mu += returns[k - i];
        mu /= n;
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = returns[k - i] - mu;
            ss += d * d;
        }
        out.push_back(std::sqrt(ss / (n - 1)) * annualize);
    }
    return out;
}

double lead_lag_correlation(const std::vector<double>& a, const std::vector<double>& b, int tau) {
    // correlate a_t with b_{t+tau}
    long start_a = tau < 0 ? -static_cast<long>(tau) : 0;
    long start_b = tau > 0 ? tau : 0;
    long len = std::min(static_cast<long>(a.size()) - start_a, static_cast<long>(b.size()) - start_b);
    if (len < 30) throw rejected_parameters("lead_lag_correlation: overlap after shift below 30");
    std::vector<double> av(a.begin() + start_a, a.begin() + start_a + len);
    std::vector<double> bv(b.begin() + start_b, b.begin() + start_b + len);
    return pearson(PairedSamples(std::move(av), std::move(bv)));
}

double sentiment_score(long calls, long puts) {
    if (calls < 0 || puts < 0) throw rejected_input("sentiment_score: counts must be >= 0");
    if (calls + puts == 0) throw undefined_correlation("sentiment_score: no orders");
    return 100.0 * static_cast<double>(calls - puts) / static_cast<double>(calls + puts);
}

} // namespace stochlab
