#include "ncgspectra/fuzzy_torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncg {

namespace {
constexpr cplx kI{0.0, 1.0};

ComplexMatrix pauli(int a) {
    ComplexMatrix s(2);
    switch (a) {
        case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
        case 2: s(0, 1) = -kI; s(1, 0) = kI; break;
        case 3: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
        default: throw std::invalid_argument("pauli: index must be 1, 2, or 3");
    }
    return s;
}

ComplexMatrix real_part(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

ComplexMatrix imag_part(const ComplexMatrix& m) {
    ComplexMatrix r(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            r(i, j) = (m(i, j) - std::conj(m(j, i))) / (2.0 * kI);
    return r;
}

// ad_X on vec'd H_n: I (x) X - X^T (x) I
ComplexMatrix ad_matrix(const ComplexMatrix& x) {
    const std::size_t n = x.dim();
    return kron(ComplexMatrix::identity(n), x) - kron(x.transpose(), ComplexMatrix::identity(n));
}
}  // namespace

ComplexMatrix clock(std::size_t n) {
    if (n == 0) throw std::invalid_argument("clock: n must be positive");
    ComplexMatrix u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        u(k, k) = cplx{std::cos(th), std::sin(th)};
    }
    return u;
}

ComplexMatrix shift(std::size_t n) {
    if (n == 0) throw std::invalid_argument("shift: n must be positive");
    ComplexMatrix v(n);
    for (std::size_t k = 0; k < n; ++k) v(k, (k + 1) % n) = 1.0;
    return v;
}

std::array<ComplexMatrix, 4> gamma_matrices() {
    const ComplexMatrix s1 = pauli(1), s2 = pauli(2), s3 = pauli(3);
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    return {kron(s2, s1), kron(s2, s2), kron(s2, s3), kron(s3, i2)};
}

ComplexMatrix gamma_five() {
    const auto g = gamma_matrices();
    return g[0] * g[1] * g[2] * g[3];
}

FuzzyTorusTriple dirac_fuzzy(std::size_t n) {
    if (n == 0) throw std::invalid_argument("dirac_fuzzy: n must be positive");
    FuzzyTorusTriple t;
    t.n = n;
    t.clock = clock(n);
    t.shift = shift(n);
    t.gammas = gamma_matrices();

    const ComplexMatrix xs[4] = {real_part(t.clock), imag_part(t.clock),
                                 real_part(t.shift), imag_part(t.shift)};
    const double kappa = static_cast<double>(n) / (2.0 * std::numbers::pi);
    ComplexMatrix d(4 * n * n);
    for (int i = 0; i < 4; ++i) d += kron(ad_matrix(xs[i]), t.gammas[i]);
    d *= kappa;
    t.dirac = std::move(d);
    return t;
}

ComplexMatrix represent(const FuzzyTorusTriple& t, const ComplexMatrix& a) {
    if (a.dim() != t.n) throw std::invalid_argument("represent: element dim must equal n");
    return kron(kron(ComplexMatrix::identity(t.n), a), ComplexMatrix::identity(4));
}

FuzzyTorusTriple scaled_triple(const FuzzyTorusTriple& t, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("scaled_triple: scale must be positive");
    FuzzyTorusTriple s = t;
    s.dirac_scale = t.dirac_scale * c;
    s.dirac *= c;
    return s;
}

const char* const kClosedFormConvention =
    "lambda(m,k,s,o) = o*(n/2pi)*sqrt(A + s*sqrt(A^2-B^2)), s,o in {+1,-1}, "
    "A = 2*(t_m^2+t_{m+1}^2+t_k^2+t_{k+1}^2), B = 4*(t_m*t_{m+1}+t_k*t_{k+1}), "
    "t_j = sin(pi*j/n), m,k in {0..n-1}; printed-form deltas: leading inner minus "
    "read as plus, brackets read with half-angle sines sin(pi*x/n)/sin(pi/n), index "
    "range Z_n, overall scale 2*sin^2(pi/n)*(n/2pi)^2 on the bracket-normalized form";

ClosedFormSpectrum fuzzy_spectrum_closed_form(std::size_t n) {
    if (n < 2) throw std::invalid_argument("fuzzy_spectrum_closed_form: n must be at least 2");
    ClosedFormSpectrum out;
    out.discarded_branches = 0;
    out.convention = kClosedFormConvention;
    out.values.reserve(4 * n * n);

    std::vector<double> t(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        t[j] = std::sin(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    const double c = static_cast<double>(n) / (2.0 * std::numbers::pi);

    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const double A = 2.0 * (t[m] * t[m] + t[m + 1] * t[m + 1] + t[k] * t[k] + t[k + 1] * t[k + 1]);
            const double B = 4.0 * (t[m] * t[m + 1] + t[k] * t[k + 1]);
            const double disc = A * A - B * B;
            if (disc < 0.0 && disc < -1e-12 * (1.0 + A * A)) {
                out.discarded_branches += 2;
                continue;
            }
            const double r = std::sqrt(std::max(disc, 0.0));
            for (const double inner : {+1.0, -1.0}) {
                const double rad = A + inner * r;
                if (rad < 0.0 && rad < -1e-12 * (1.0 + A)) {
                    ++out.discarded_branches;
                    continue;
                }
                const double lam = c * std::sqrt(std::max(rad, 0.0));
                out.values.push_back(lam);
                out.values.push_back(-lam);
            }
        }
    }
    std::sort(out.values.begin(), out.values.end());
    return out;
}

LimitSpectrum limit_spectrum(std::size_t index_max) {
    LimitSpectrum out;
    std::vector<std::pair<double, std::uint64_t>> raw;
    for (std::size_t m = 0; m <= index_max; ++m) {
        for (std::size_t k = 0; k <= index_max; ++k) {
            const double md = static_cast<double>(m), kd = static_cast<double>(k);
            const double inner = 2.0 * md * md - 2.0 * md + 2.0 * kd + 2.0 * kd * kd + 1.0;
            if (inner < 0.0) continue;
            const double r = std::sqrt(inner);
            for (const double si : {+1.0, -1.0}) {
                const double rad = md * md + kd + kd * kd + 1.0 - md + si * r;
                if (rad < -1e-12) continue;
                const double lam = std::sqrt(std::max(rad, 0.0));
                raw.emplace_back(lam, 1);
                raw.emplace_back(-lam, 1);
            }
        }
    }
    std::sort(raw.begin(), raw.end());
    for (const auto& [v, c] : raw) {
        if (!out.values.empty() && std::abs(v - out.values.back()) <= 1e-12) {
            out.generators[out.values.back()] += c;
        } else {
            out.values.push_back(v);
            out.generators[v] = c;
        }
    }
    return out;
}

}  // namespace ncg
