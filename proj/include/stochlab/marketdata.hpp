#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stochlab {

// One trading day. High/low are accepted on ingestion and ignored by the
// analytics.
struct OhlcRecord {
    std::string date; // ISO-8601
    double open = 0.0;
    double close = 0.0;
};

struct OhlcSeries {
    std::vector<OhlcRecord> days; // strictly increasing dates, positive prices
    std::size_t dropped_rows = 0; // rows removed during ingestion
    std::vector<std::size_t> outlier_days; // |log-return| > 5 sigma; retained
};

struct OhlcLoadOptions {
    bool header = true;
    // zero-based column positions for date,open,high,low,close
    std::array<int, 5> columns{0, 1, 2, 3, 4};
    bool drop_outliers = false; // sensitivity runs only; default keeps them
};

OhlcSeries load_ohlc(std::istream& is, const OhlcLoadOptions& opt = {});
OhlcSeries load_ohlc_file(const std::string& path, const OhlcLoadOptions& opt = {});

// Intraday d_k = ln(c_k/o_k) and overnight n_k = ln(o_k/c_{k-1}), both
// indexed by the day the night runs into; day 1 has no overnight return, so
// both vectors have length T-1 and entry j belongs to trading day j+2.
struct SessionReturns {
    std::vector<double> d;
    std::vector<double> n;
};

SessionReturns session_returns(const OhlcSeries& s);

enum class AsymmetryMethod { pearson, spearman, mi_knn };

struct AsymmetryEntry {
    std::string method;
    double c_nd;  // intraday vol vs preceding night vol
    double c_dn;  // intraday vol vs following night vol
    std::optional<double> ratio; // c_nd / c_dn when defined
};

struct AsymmetryReport {
    std::vector<AsymmetryEntry> entries;
    std::string to_json() const;
    std::string to_csv_row(const std::string& label) const; // flat row per equity
    static std::string csv_header(const std::vector<AsymmetryEntry>& entries);
};

// Volatility pairs are (|d_k|, |n_k|) and (|d_k|, |n_{k+1}|), averaged across
// all trading days. MI entries use the KNN estimator (algorithm 2) with the
// given K; their ratio is I_nd/I_dn and requires both to be positive.
AsymmetryReport asymmetry(const SessionReturns& sr, const std::vector<AsymmetryMethod>& methods,
                          int knn_k = 5);

// Rolling annualized volatility in percent: sample std (n-1 denominator) over
// an n-day window times sqrt(252) times 100. Output length is len - n + 1.
std::vector<double> rolling_volatility(const std::vector<double>& returns, int n = 21);

// Pearson correlation of a_t with b_{t+tau}; overlap after the shift must be
// at least 30 points.
double lead_lag_correlation(const std::vector<double>& a, const std::vector<double>& b, int tau);

// 100 * (calls - puts) / (calls + puts).
double sentiment_score(long calls, long puts);

} // namespace stochlab
