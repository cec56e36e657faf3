#include "ncgspectra/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncgspectra/eigh.hpp"

namespace ncg {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), a_(std::move(entries)) {
    if (a_.size() != dim * dim)
        throw std::invalid_argument("ComplexMatrix: entry count does not match dim*dim");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            r(j, i) = std::conj((*this)(i, j));
    return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            r(j, i) = (*this)(i, j);
    return r;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : a_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::finite() const {
    for (const cplx& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("matrix +: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw std::invalid_argument("matrix -: dimension mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : a_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("matrix *: dimension mismatch");
    const std::size_t n = a.dim_;
    ComplexMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            const cplx* brow = &b.a_[k * n];
            cplx* crow = &c.a_[i * n];
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

double hermiticity_defect(const ComplexMatrix& m) {
    double d = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = i; j < m.dim(); ++j)
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

bool hermitian(const ComplexMatrix& m) {
    return hermiticity_defect(m) <= 1e-10 * (1.0 + m.max_abs());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    ComplexMatrix r(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    r(i * db + k, j * db + l) = aij * b(k, l);
        }
    return r;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.dim() == 0) return 0.0;
    if (hermitian(m)) {
        std::vector<double> ev = eigh_values(m);
        return std::max(std::abs(ev.front()), std::abs(ev.back()));
    }
    // Hermitian embedding [[0, M], [M^dagger, 0]]; its spectrum is {+-sigma_i}.
    const std::size_t n = m.dim();
    ComplexMatrix e(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            e(i, n + j) = m(i, j);
            e(n + j, i) = std::conj(m(i, j));
        }
    std::vector<double> ev = eigh_values(e);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

std::vector<cplx> matvec(const ComplexMatrix& m, const std::vector<cplx>& x) {
    if (x.size() != m.dim()) throw std::invalid_argument("matvec: dimension mismatch");
    std::vector<cplx> y(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double vec_norm(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const cplx& z : x) s += std::norm(z);
    return std::sqrt(s);
}

cplx vec_dot(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec_dot: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
    return s;
}

bool gram_independent(const std::vector<std::vector<cplx>>& vectors, double alpha) {
    if (vectors.empty()) throw std::invalid_argument("gram_independent: empty vector list");
    const std::size_t d = vectors.size();
    const std::size_t len = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != len) throw std::invalid_argument("gram_independent: mixed dimensions");

    ComplexMatrix g(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            g(i, j) = vec_dot(vectors[i], vectors[j]);

    for (std::size_t i = 0; i < d; ++i)
        if (g(i, i).real() < alpha) return false;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j && std::abs(g(i, j)) >= alpha / static_cast<double>(d)) return false;

    // Hypothesis satisfied: the vectors are guaranteed independent. Cross-check
    // by numerical rank of the Gram matrix (eigenvalues are squared singular
    // values of the stack).
    std::vector<double> ev = eigh_values(g);
    const double lmax = std::max(ev.back(), 0.0);
    const double thresh = 1e-16 * lmax;
    std::size_t rank = 0;
    for (double l : ev)
        if (l > thresh) ++rank;
    if (rank != d)
        throw std::runtime_error("gram_independent: hypothesis satisfied but numerical rank deficient");
    return true;
}

}  // namespace ncg
