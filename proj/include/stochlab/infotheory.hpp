#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stochlab {

// Two aligned real-valued sample vectors.
struct PairedSamples {
    std::vector<double> x;
    std::vector<double> y;

    PairedSamples() = default;
    PairedSamples(std::vector<double> xs, std::vector<double> ys);
    std::size_t size() const { return x.size(); }

    // CSV columns "x,y"; header row optional.
    static PairedSamples read_csv(std::istream& is, bool header);
    void write_csv(std::ostream& os) const;
};

double pearson(const PairedSamples& s);
double spearman(const PairedSamples& s); // Pearson on average ranks
double autocorrelation(const std::vector<double>& series, int lag);

// Average ranks (1-based, ties averaged).
std::vector<double> ranks(const std::vector<double>& v);

// Discrete joint distribution p(i,j) on an I x J support.
struct DiscreteJoint {
    std::size_t ni = 0, nj = 0;
    std::vector<double> p; // row-major

    DiscreteJoint(std::size_t i, std::size_t j);
    double& at(std::size_t i, std::size_t j) { return p[i * nj + j]; }
    double at(std::size_t i, std::size_t j) const { return p[i * nj + j]; }
    void validate(double tol = 1e-12) const;
    std::vector<double> marginal_x() const;
    std::vector<double> marginal_y() const;
};

// Three-way tensor for the conditional variant.
struct DiscreteJoint3 {
    std::size_t ni = 0, nj = 0, nk = 0;
    std::vector<double> p;

    DiscreteJoint3(std::size_t i, std::size_t j, std::size_t k);
    double& at(std::size_t i, std::size_t j, std::size_t k) { return p[(i * nj + j) * nk + k]; }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return p[(i * nj + j) * nk + k]; }
    void validate(double tol = 1e-12) const;
};

// Entropy family in nats; 0 log 0 := 0.
struct InformationMeasures {
    double h_x;
    double h_y;
    double h_xy;
    double h_x_given_y;
    double mutual_information;
};
InformationMeasures information_measures(const DiscreteJoint& j);

// Kullback-Leibler divergence D(p||q) between two joints on the same support.
double kl_divergence(const DiscreteJoint& p, const DiscreteJoint& q);

// I(X;Y|Z) evaluated from the three-way joint.
double conditional_mutual_information(const DiscreteJoint3& j);

double nats_to_bits(double nats);

struct MiEstimate {
    double value = 0.0; // nats
    std::string method; // histogram | knn1 | knn2 | analytic
    int param = 0;      // bins or K
    std::size_t n = 0;  // sample count
    std::string to_json() const;
};

// Binned estimator: equal-width bins spanning [min,max] of each margin,
// frequencies n/N as probabilities.
MiEstimate mi_histogram(const PairedSamples& s, int bins);

// The empirical joint the histogram estimator uses, exposed so the binned
// estimate can be cross-checked against information_measures.
DiscreteJoint histogram_joint(const PairedSamples& s, int bins);

// K-nearest-neighbor estimators under the max norm. Algorithm 1 counts
// strictly inside the joint radius eps(i)/2; algorithm 2 counts within the
// per-axis projected radii (non-strict) and subtracts 1/K. Duplicate points
// are broken by a deterministic jitter of 1e-10 times the data range.
MiEstimate mi_knn(const PairedSamples& s, int k, int algorithm);
// Single-threaded reference path; bitwise-identical to mi_knn.
MiEstimate mi_knn_serial(const PairedSamples& s, int k, int algorithm);

// Analytic value -0.5*ln(1-a^2) for the jointly Gaussian pair; |a| < 1.
double gaussian_mi(double a);

// AR(1) pair: x_t = c + a x_{t-1} + eps_t with eps ~ N(0, sigma^2), started
// from the stationary law, and y_t = a*x_{t-1}. Requires |a| < 1.
PairedSamples ar1_generate(double a, double c, double sigma, std::size_t n, std::uint64_t seed);

} // namespace stochlab
