#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace stochlab {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct EigenLeading {
    std::complex<double> value;
    ComplexVector right;
    ComplexVector left;           // y with y^T Q = lambda y^T
    bool degenerate = false;      // more than one eigenvalue ties max |lambda|
    std::vector<std::complex<double>> leading_set; // all eigenvalues at max modulus
};

// Leading (largest |lambda|) eigenvalue with right and left eigenvectors for
// dim <= 8. Ties in modulus within relative 1e-9 set the degeneracy flag and
// are all reported; the principal one is the tie member with the largest real
// part. Residual ||Qv - lambda v||_inf is checked against 1e-10.
EigenLeading eigen_leading(const ComplexMatrix& m);

// First and second derivatives of the leading eigenvalue of a matrix family
// Q(s) at a point where that eigenvalue is simple, from the family's exact
// first and second entrywise derivatives (Hellmann-Feynman and one deflated
// linear solve; no finite differences).
struct EigenDerivatives {
    std::complex<double> lambda;
    std::complex<double> d1;
    std::complex<double> d2;
};
EigenDerivatives eigen_derivatives(const ComplexMatrix& q, const ComplexMatrix& dq,
                                   const ComplexMatrix& ddq);

// JSON array-of-arrays of [re,im] pairs.
std::string complex_matrix_to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const std::string& text);

} // namespace stochlab
