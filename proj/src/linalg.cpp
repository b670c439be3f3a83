#include "stochlab/linalg.hpp"

#include "stochlab/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

namespace stochlab {

using json = nlohmann::json;

EigenLeading eigen_leading(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) throw rejected_input("eigen_leading: square matrix required");
    if (m.rows() > 8) throw rejected_input("eigen_leading: dim must be <= 8");

    Eigen::ComplexEigenSolver<ComplexMatrix> right_solver(m, true);
    if (right_solver.info() != Eigen::Success)
        throw numerical_failure("eigen_leading: eigen decomposition did not converge");
    Eigen::ComplexEigenSolver<ComplexMatrix> left_solver(m.transpose(), true);
    if (left_solver.info() != Eigen::Success)
        throw numerical_failure("eigen_leading: left eigen decomposition did not converge");

    const auto& vals = right_solver.eigenvalues();
    double maxmod = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) maxmod = std::max(maxmod, std::abs(vals[i]));

    EigenLeading out;
    Eigen::Index principal = -1;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) >= maxmod * (1.0 - 1e-9)) {
            out.leading_set.push_back(vals[i]);
            if (principal < 0 || vals[i].real() > vals[principal].real()) principal = i;
        }
    }
    out.degenerate = out.leading_set.size() > 1;
    out.value = vals[principal];
    out.right = right_solver.eigenvectors().col(principal);

    // match the left eigenvector by nearest eigenvalue of the transpose
    const auto& lvals = left_solver.eigenvalues();
    Eigen::Index best = 0;
    double bestd = std::abs(lvals[0] - out.value);
    for (Eigen::Index i = 1; i < lvals.size(); ++i) {
        double d = std::abs(lvals[i] - out.value);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    out.left = left_solver.eigenvectors().col(best);

    double resid = (m * out.right - out.value * out.right).cwiseAbs().maxCoeff();
    if (resid > 1e-10)
        throw numerical_failure("eigen_leading: residual " + std::to_string(resid) + " exceeds 1e-10");
    return out;
}

EigenDerivatives eigen_derivatives(const ComplexMatrix& q, const ComplexMatrix& dq,
                                   const ComplexMatrix& ddq) {
    EigenLeading lead = eigen_leading(q);
    const auto lambda = lead.value;
    const ComplexVector& x = lead.right;
    const ComplexVector& y = lead.left; // y^T Q = lambda y^T (plain transpose)

    std::complex<double> yx = y.transpose() * x;
    if (std::abs(yx) < 1e-14) throw numerical_failure("eigen_derivatives: defective leading pair");

    std::complex<double> d1 = (y.transpose() * (dq * x)).value() / yx;

    // x' solves (Q - lambda I) x' = (d1 I - dq) x; the x-component is
    // irrelevant because <y|(dq - d1) x> = 0.
    ComplexMatrix a = q - lambda * ComplexMatrix::Identity(q.rows(), q.cols());
    ComplexVector rhs = d1 * x - dq * x;
    ComplexVector xp = a.completeOrthogonalDecomposition().solve(rhs);

    std::complex<double> d2 =
        ((y.transpose() * (ddq * x)).value() + 2.0 * (y.transpose() * ((dq - d1 * ComplexMatrix::Identity(q.rows(), q.cols())) * xp)).value()) /
        yx;
    return {lambda, d1, d2};
}

std::string complex_matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows.dump();
}

ComplexMatrix complex_matrix_from_json(const std::string& text) {
    json rows = json::parse(text);
    if (!rows.is_array() || rows.empty()) throw io_error("complex matrix json: expected array of rows");
    auto n = static_cast<Eigen::Index>(rows.size());
    auto ncols = static_cast<Eigen::Index>(rows[0].size());
    ComplexMatrix m(n, ncols);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != ncols)
            throw io_error("complex matrix json: ragged rows");
        for (Eigen::Index j = 0; j < ncols; ++j) {
            const auto& c = rows[i][j];
            m(i, j) = std::complex<double>(c.at(0).get<double>(), c.at(1).get<double>());
        }
    }
    return m;
}

} // namespace stochlab
