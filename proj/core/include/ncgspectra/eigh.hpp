#pragma once

#include "ncgspectra/matrix.hpp"

namespace ncg {

// Eigenvalues ascending; eigenvectors unitary, column j pairs with
// eigenvalue j. Residual contract: ||M v_j - lambda_j v_j|| <= 1e-9 ||M||_op
// and unitarity of the eigenvector matrix to the same tolerance.
struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    std::vector<cplx> eigenvector(std::size_t j) const;
};

inline constexpr double kEigResidualTol = 1e-9;

// Householder tridiagonalization followed by implicit-shift QL on the real
// tridiagonal problem, with accumulated transformations. Input must satisfy
// hermitian(); throws std::invalid_argument otherwise, std::runtime_error
// with an iteration report on convergence failure.
HermitianEigenDecomposition eigh(const ComplexMatrix& m);

// Eigenvalues only (same reduction, no accumulation); ascending.
std::vector<double> eigh_values(const ComplexMatrix& m);

}  // namespace ncg
