#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ncg {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major, value semantics.
// Immutable by convention once handed to an operation; all operations
// below are pure functions.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    ComplexMatrix dagger() const;
    ComplexMatrix transpose() const;
    cplx trace() const;
    double max_abs() const;         // entrywise max modulus
    double frobenius_norm() const;
    bool finite() const;            // no NaN/Inf in either component

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> a_;
};

// hermiticity_tol = 1e-10 * (1 + max|entry|)
bool hermitian(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);   // max|M - M^dagger|

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// ab - ba; dims must agree
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Largest singular value. Hermitian input reduces to max|eigenvalue|;
// the general case diagonalizes the Hermitian embedding [[0,M],[M^dagger,0]].
double operator_norm(const ComplexMatrix& m);

std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& x);
double vec_norm(const std::vector<cplx>& x);
cplx vec_dot(const std::vector<cplx>& x, const std::vector<cplx>& y);  // conjugate-linear in x

// Gram-matrix independence test: true iff ||v_j||^2 >= alpha for all j and
// |<v_j,v_k>| < alpha/d for j != k. A true verdict is cross-checked by the
// numerical rank of the stacked vectors (SVD threshold 1e-8 * sigma_max);
// rank < d under a satisfied hypothesis indicates a numerical inconsistency
// and throws.
bool gram_independent(const std::vector<std::vector<cplx>>& vectors, double alpha);

}  // namespace ncg
