#include "ncgspectra/eigh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncg {

namespace {

// Householder reduction of Hermitian A (row-major, full storage) to real
// symmetric tridiagonal (d, e). Reflector vectors are left in the strict
// lower part of column k (rows k+1..), scalars in beta, and the complex
// subdiagonal before phase absorption in csub. e[i+1] = |csub[i]|.
void householder_tridiag(std::vector<cplx>& a, std::size_t n,
                         std::vector<double>& d, std::vector<double>& e,
                         std::vector<cplx>& csub, std::vector<double>& beta) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    csub.assign(n > 0 ? n - 1 : 0, cplx{});
    beta.assign(n > 0 ? n - 1 : 0, 0.0);
    std::vector<cplx> v(n), p(n), q(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column below the diagonal
        double xnorm2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            v[j] = a[(k + 1 + j) * n + k];
            xnorm2 += std::norm(v[j]);
        }
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) {
            csub[k] = 0.0;
            beta[k] = 0.0;
            continue;
        }
        const cplx alpha = v[0];
        const cplx phase = (alpha == cplx{}) ? cplx{1.0} : alpha / std::abs(alpha);
        const cplx sigma = -phase * xnorm;
        v[0] -= sigma;
        double vnorm2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) vnorm2 += std::norm(v[j]);
        csub[k] = sigma;
        if (vnorm2 == 0.0) {
            beta[k] = 0.0;
            for (std::size_t j = 1; j < m; ++j) a[(k + 1 + j) * n + k] = 0.0;
            continue;
        }
        const double b = 2.0 / vnorm2;
        beta[k] = b;

        // p = b * B * v over the trailing block B = a[k+1.., k+1..]
        for (std::size_t i = 0; i < m; ++i) {
            const cplx* row = &a[(k + 1 + i) * n + (k + 1)];
            cplx s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
            p[i] = b * s;
        }
        cplx kap = 0.0;
        for (std::size_t j = 0; j < m; ++j) kap += std::conj(v[j]) * p[j];
        kap *= 0.5 * b;
        for (std::size_t j = 0; j < m; ++j) q[j] = p[j] - kap * v[j];

        // B -= v q^dagger + q v^dagger
        for (std::size_t i = 0; i < m; ++i) {
            cplx* row = &a[(k + 1 + i) * n + (k + 1)];
            const cplx vi = v[i], qi = q[i];
            for (std::size_t j = 0; j < m; ++j)
                row[j] -= vi * std::conj(q[j]) + qi * std::conj(v[j]);
        }

        // park the reflector in the zeroed part of column k
        for (std::size_t j = 0; j < m; ++j) a[(k + 1 + j) * n + k] = v[j];
    }
    if (n >= 2) csub[n - 2] = a[(n - 1) * n + (n - 2)];

    for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i].real();
    for (std::size_t i = 0; i + 1 < n; ++i) e[i + 1] = std::abs(csub[i]);
}

// Implicit-shift QL on a real symmetric tridiagonal. e uses the offset
// convention e[i] = subdiagonal coupling d[i-1], d[i] (e[0] unused). When
// z != nullptr, plane rotations accumulate into the complex columns of z
// (row-major, n x n).
void tql_implicit(std::vector<double>& d, std::vector<double>& e, std::size_t n,
                  std::vector<cplx>* z) {
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    // absolute deflation floor at eps * ||T||; the neighbor-relative test
    // alone stalls on chains of near-zero diagonals (projector spectra)
    double dmax = 0.0, emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dmax = std::max(dmax, std::abs(d[i]));
        emax = std::max(emax, std::abs(e[i]));
    }
    const double floor_thresh = 2.3e-16 * (dmax + 2.0 * emax);

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= floor_thresh ||
                    std::abs(e[m]) <= 2.3e-16 * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error(
                        "eigh: QL failed to converge after 60 iterations at eigenvalue index " +
                        std::to_string(l) + " of " + std::to_string(n));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (std::size_t k = 0; k < n; ++k) {
                            cplx* row = &(*z)[k * n];
                            const cplx f2 = row[i + 1];
                            row[i + 1] = s * row[i] + c * f2;
                            row[i] = c * row[i] - s * f2;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void check_hermitian(const ComplexMatrix& m) {
    if (!m.finite()) throw std::invalid_argument("eigh: non-finite entries");
    if (!hermitian(m)) throw std::invalid_argument("eigh: input is not Hermitian");
}

}  // namespace

std::vector<cplx> HermitianEigenDecomposition::eigenvector(std::size_t j) const {
    const std::size_t n = eigenvectors.dim();
    std::vector<cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = eigenvectors(i, j);
    return v;
}

std::vector<double> eigh_values(const ComplexMatrix& m) {
    check_hermitian(m);
    const std::size_t n = m.dim();
    std::vector<cplx> a = m.data();
    std::vector<double> d, e;
    std::vector<cplx> csub;
    std::vector<double> beta;
    householder_tridiag(a, n, d, e, csub, beta);
    tql_implicit(d, e, n, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

HermitianEigenDecomposition eigh(const ComplexMatrix& m) {
    check_hermitian(m);
    const std::size_t n = m.dim();
    std::vector<cplx> a = m.data();
    std::vector<double> d, e;
    std::vector<cplx> csub;
    std::vector<double> beta;
    householder_tridiag(a, n, d, e, csub, beta);

    // phases turning the complex tridiagonal real: ph[0] = 1,
    // ph[i+1] = ph[i] * csub[i]/|csub[i]|
    std::vector<cplx> ph(n, cplx{1.0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double r = std::abs(csub[i]);
        ph[i + 1] = (r == 0.0) ? ph[i] : ph[i] * (csub[i] / r);
    }

    std::vector<cplx> z(n * n, cplx{});
    for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    tql_implicit(d, e, n, &z);

    // eigenvectors of the complex tridiagonal: scale row i by ph[i]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) z[i * n + j] *= ph[i];

    // Householder back-transformation, reflectors in reverse order
    std::vector<cplx> w(n);
    for (std::size_t kk = n >= 3 ? n - 2 : 0; kk-- > 0;) {
        const std::size_t k = kk;
        if (beta[k] == 0.0) continue;
        const std::size_t mlen = n - k - 1;
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < mlen; ++i)
                s += std::conj(a[(k + 1 + i) * n + k]) * z[(k + 1 + i) * n + j];
            w[j] = beta[k] * s;
        }
        for (std::size_t i = 0; i < mlen; ++i) {
            const cplx vi = a[(k + 1 + i) * n + k];
            cplx* zrow = &z[(k + 1 + i) * n];
            for (std::size_t j = 0; j < n; ++j) zrow[j] -= vi * w[j];
        }
    }

    // ascending sort with the column permutation applied
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    HermitianEigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = d[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = z[i * n + idx[j]];
    }
    return out;
}

}  // namespace ncg
