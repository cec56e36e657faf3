#include "ncgspectra/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncg {

namespace {
constexpr cplx kI{0.0, 1.0};

double interp_linear(const std::vector<std::pair<double, double>>& s, double x) {
    if (s.empty()) return 0.0;
    if (x <= s.front().first) return x == s.front().first ? s.front().second : 0.0;
    if (x >= s.back().first) return x == s.back().first ? s.back().second : 0.0;
    auto it = std::lower_bound(s.begin(), s.end(), x,
                               [](const auto& p, double v) { return p.first < v; });
    const auto [x1, y1] = *it;
    const auto [x0, y0] = *(it - 1);
    if (x1 == x0) return y1;
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

// V diag(g(lambda)) V^dagger
ComplexMatrix assemble(const HermitianEigenDecomposition& e, const std::vector<cplx>& diag) {
    const std::size_t n = e.eigenvectors.dim();
    const ComplexMatrix& v = e.eigenvectors;
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx w = v(i, k) * diag[k];
            if (w == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += w * std::conj(v(j, k));
        }
    return r;
}

// erfc^{-1} by bisection; erfc is strictly decreasing on [0, 40]
double erfc_inverse(double y) {
    if (!(y > 0.0) || y >= 2.0) throw std::invalid_argument("erfc_inverse: y outside (0, 2)");
    double lo = 0.0, hi = 40.0;
    if (y >= 1.0) return 0.0;  // cutoff selection only uses y < 1
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct QuadState {
    const std::vector<double>& lambdas;
    const SpectralFunction& f;
    double error = 0.0;
    std::size_t evals = 0;
    int max_depth_hit = 0;
};

std::vector<cplx> integrand(QuadState& st, double x) {
    ++st.evals;
    const double w = st.f.fourier_eval(x);
    std::vector<cplx> g(st.lambdas.size());
    for (std::size_t j = 0; j < st.lambdas.size(); ++j) {
        const double ph = st.lambdas[j] * x;
        g[j] = w * cplx{std::cos(ph), std::sin(ph)};
    }
    return g;
}

std::vector<cplx> simpson(const std::vector<cplx>& fa, const std::vector<cplx>& fm,
                          const std::vector<cplx>& fb, double h) {
    std::vector<cplx> s(fa.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = (h / 6.0) * (fa[j] + 4.0 * fm[j] + fb[j]);
    return s;
}

void adaptive_step(QuadState& st, double a, double b, const std::vector<cplx>& fa,
                   const std::vector<cplx>& fm, const std::vector<cplx>& fb,
                   const std::vector<cplx>& whole, double tol, int depth,
                   std::vector<cplx>& out) {
    const double m = 0.5 * (a + b);
    const std::vector<cplx> fl = integrand(st, 0.5 * (a + m));
    const std::vector<cplx> fr = integrand(st, 0.5 * (m + b));
    const std::vector<cplx> left = simpson(fa, fl, fm, m - a);
    const std::vector<cplx> right = simpson(fm, fr, fb, b - m);
    double err = 0.0;
    for (std::size_t j = 0; j < whole.size(); ++j)
        err = std::max(err, std::abs(left[j] + right[j] - whole[j]) / 15.0);
    if (err <= tol || depth >= 48) {
        if (depth >= 48) st.max_depth_hit = depth;
        st.error += err;
        for (std::size_t j = 0; j < whole.size(); ++j)
            out[j] += left[j] + right[j] + (left[j] + right[j] - whole[j]) / 15.0;
        return;
    }
    adaptive_step(st, a, m, fa, fl, fm, left, 0.5 * tol, depth + 1, out);
    adaptive_step(st, m, b, fm, fr, fb, right, 0.5 * tol, depth + 1, out);
}

std::vector<cplx> adaptive_simpson(QuadState& st, double a, double b, double tol) {
    std::vector<cplx> out(st.lambdas.size(), cplx{});
    const double m = 0.5 * (a + b);
    const std::vector<cplx> fa = integrand(st, a);
    const std::vector<cplx> fm = integrand(st, m);
    const std::vector<cplx> fb = integrand(st, b);
    const std::vector<cplx> whole = simpson(fa, fm, fb, b - a);
    adaptive_step(st, a, b, fa, fm, fb, whole, tol, 0, out);
    return out;
}
}  // namespace

SpectralFunction SpectralFunction::gaussian(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
    SpectralFunction f;
    f.kind = Kind::kGaussian;
    f.width = width;
    FourierData fd;
    fd.analytic_gaussian = true;
    f.fourier = fd;
    return f;
}

SpectralFunction SpectralFunction::bump(double center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump: radius must be positive");
    SpectralFunction f;
    f.kind = Kind::kBump;
    f.center = center;
    f.radius = radius;
    return f;
}

SpectralFunction SpectralFunction::resolvent(cplx pole) {
    SpectralFunction f;
    f.kind = Kind::kResolvent;
    f.pole = pole;
    return f;
}

SpectralFunction SpectralFunction::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw std::invalid_argument("tabulated: empty sample list");
    if (!std::is_sorted(samples.begin(), samples.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("tabulated: samples must be sorted by abscissa");
    SpectralFunction f;
    f.kind = Kind::kTabulated;
    f.samples = std::move(samples);
    return f;
}

double SpectralFunction::eval(double x) const {
    switch (kind) {
        case Kind::kGaussian: {
            const double u = x / width;
            return std::exp(-u * u);
        }
        case Kind::kBump: {
            const double u = (x - center) / radius;
            if (std::abs(u) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
        case Kind::kTabulated:
            return interp_linear(samples, x);
        case Kind::kResolvent:
            throw std::invalid_argument("eval: resolvent kind is complex-valued");
    }
    return 0.0;
}

cplx SpectralFunction::eval_complex(double x) const {
    if (kind == Kind::kResolvent) {
        if (pole.imag() == 0.0)
            throw std::invalid_argument("resolvent: pole must have nonzero imaginary part");
        return 1.0 / (cplx{x, 0.0} - pole);
    }
    return eval(x);
}

double SpectralFunction::fourier_eval(double x) const {
    if (!fourier) throw std::invalid_argument("fourier_eval: no Fourier data");
    if (fourier->analytic_gaussian) {
        const double u = 0.5 * width * x;
        return width / (2.0 * std::sqrt(std::numbers::pi)) * std::exp(-u * u);
    }
    return interp_linear(fourier->samples, x);
}

DiracCalculus::DiracCalculus(ComplexMatrix d) : d_(std::move(d)) {
    if (!hermitian(d_)) throw std::invalid_argument("DiracCalculus: matrix is not Hermitian");
}

DiracCalculus::DiracCalculus(ComplexMatrix d, HermitianEigenDecomposition precomputed)
    : d_(std::move(d)) {
    if (!hermitian(d_)) throw std::invalid_argument("DiracCalculus: matrix is not Hermitian");
    eig_ = std::make_unique<HermitianEigenDecomposition>(std::move(precomputed));
}

const HermitianEigenDecomposition& DiracCalculus::decomposition() const {
    std::call_once(once_, [this] {
        if (!eig_) eig_ = std::make_unique<HermitianEigenDecomposition>(eigh(d_));
    });
    return *eig_;
}

double DiracCalculus::op_norm() const {
    const auto& e = decomposition();
    if (e.eigenvalues.empty()) return 0.0;
    return std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
}

ComplexMatrix DiracCalculus::unitary_group(double t) const {
    const auto& e = decomposition();
    std::vector<cplx> diag(e.eigenvalues.size());
    for (std::size_t j = 0; j < diag.size(); ++j) {
        const double ph = t * e.eigenvalues[j];
        diag[j] = cplx{std::cos(ph), std::sin(ph)};
    }
    return assemble(e, diag);
}

ComplexMatrix DiracCalculus::apply_eig(const SpectralFunction& f) const {
    const auto& e = decomposition();
    std::vector<cplx> diag(e.eigenvalues.size());
    for (std::size_t j = 0; j < diag.size(); ++j) diag[j] = f.eval_complex(e.eigenvalues[j]);
    return assemble(e, diag);
}

ComplexMatrix DiracCalculus::apply_fourier(const SpectralFunction& f, double eps,
                                           FourierCertificate* cert) const {
    if (!(eps > 0.0)) throw std::invalid_argument("apply_fourier: eps must be positive");
    if (!f.fourier) throw std::invalid_argument("apply_fourier: function has no Fourier data");

    double cutoff = 0.0, tail = 0.0;
    if (f.fourier->analytic_gaussian) {
        // two-sided tail of |fhat| beyond M is erfc(w M / 2)
        const double y = std::min(0.5 * eps, 0.999);
        cutoff = 2.0 / f.width * erfc_inverse(y);
        tail = std::erfc(0.5 * f.width * cutoff);
    } else {
        const double c = f.fourier->envelope_c;
        if (!(c > 0.0))
            throw std::invalid_argument(
                "apply_fourier: tabulated Fourier data requires a dominating envelope c/(1+x^2)");
        // integral of c/(1+x^2) outside [-M, M] is 2 c atan(1/M)
        const double target = 0.5 * eps;
        if (target >= 2.0 * c * std::numbers::pi) {
            cutoff = std::max(f.fourier->envelope_from, 1e-8);
        } else {
            cutoff = std::max(1.0 / std::tan(std::min(target / (2.0 * c), 1.5)),
                              f.fourier->envelope_from);
        }
        tail = 2.0 * c * std::atan(1.0 / cutoff);
        if (!f.fourier->samples.empty())
            cutoff = std::min(cutoff, std::max(std::abs(f.fourier->samples.front().first),
                                               std::abs(f.fourier->samples.back().first)));
        if (tail > eps)
            throw std::runtime_error("apply_fourier: tail bound unattainable with given envelope");
    }

    const auto& e = decomposition();
    QuadState st{e.eigenvalues, f};
    const std::vector<cplx> g = adaptive_simpson(st, -cutoff, cutoff, 0.5 * eps);
    if (cert) {
        cert->cutoff = cutoff;
        cert->tail_bound = tail;
        cert->quadrature_error = st.error;
        cert->evaluations = st.evals;
    }
    return assemble(e, g);
}

double DiracCalculus::spectral_action(const SpectralFunction& f, double scale) const {
    if (!(scale > 0.0)) throw std::invalid_argument("spectral_action: scale must be positive");
    if (!f.real_valued()) throw std::invalid_argument("spectral_action: f must be real-valued");
    const auto& e = decomposition();
    double s = 0.0;
    for (double l : e.eigenvalues) s += f.eval(l / scale);
    return s;
}

ComplexMatrix DiracCalculus::resolvent(cplx lambda) const {
    if (lambda.imag() == 0.0)
        throw std::invalid_argument("resolvent: lambda must have nonzero imaginary part");
    return apply_eig(SpectralFunction::resolvent(lambda));
}

ComplexMatrix unitary_group(const ComplexMatrix& d, double t) {
    return DiracCalculus(d).unitary_group(t);
}

double graph_norm(const ComplexMatrix& d, const std::vector<cplx>& xi) {
    if (xi.size() != d.dim()) throw std::invalid_argument("graph_norm: dimension mismatch");
    return vec_norm(xi) + vec_norm(matvec(d, xi));
}

ComplexMatrix apply_function_eig(const ComplexMatrix& d, const SpectralFunction& f) {
    return DiracCalculus(d).apply_eig(f);
}

ComplexMatrix apply_function_fourier(const ComplexMatrix& d, const SpectralFunction& f,
                                     double eps, FourierCertificate* cert) {
    return DiracCalculus(d).apply_fourier(f, eps, cert);
}

double spectral_action(const ComplexMatrix& d, const SpectralFunction& f, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("spectral_action: scale must be positive");
    if (!f.real_valued()) throw std::invalid_argument("spectral_action: f must be real-valued");
    std::vector<double> ev = eigh_values(d);
    double s = 0.0;
    for (double l : ev) s += f.eval(l / scale);
    return s;
}

ComplexMatrix resolvent(const ComplexMatrix& d, cplx lambda) {
    return DiracCalculus(d).resolvent(lambda);
}

IsoIsoReport iso_iso_check(const std::vector<double>& s1, const std::vector<double>& s2,
                           double eps, std::size_t grid) {
    if (!(eps > 0.0)) throw std::invalid_argument("iso_iso_check: eps must be positive");
    if (grid == 0) throw std::invalid_argument("iso_iso_check: grid must be positive");
    if (s1.size() != grid + 1 || s2.size() != grid + 1)
        throw std::invalid_argument("iso_iso_check: samples must have grid+1 points");
    if (s1[0] != 0.0 || s2[0] != 0.0)
        throw std::invalid_argument("iso_iso_check: maps must fix 0");
    for (double v : s1)
        if (v < 0.0) throw std::invalid_argument("iso_iso_check: maps must take values in [0, inf)");
    for (double v : s2)
        if (v < 0.0) throw std::invalid_argument("iso_iso_check: maps must take values in [0, inf)");

    const double h = 1.0 / (eps * static_cast<double>(grid));
    IsoIsoReport rep;
    auto scan = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t ix = 0; ix <= grid; ++ix)
            for (std::size_t iy = ix; iy <= grid; ++iy)
                for (std::size_t iz = 0; iz <= grid; ++iz) {
                    const double x = static_cast<double>(ix) * h;
                    const double y = static_cast<double>(iy) * h;
                    const double z = static_cast<double>(iz) * h;
                    const double gap =
                        std::abs(std::abs(a[ix] + a[iy] - z) - std::abs(x + y - b[iz]));
                    rep.worst_gap = std::max(rep.worst_gap, gap);
                    if (gap >= eps) ++rep.violating_triples;
                }
    };
    scan(s1, s2);
    scan(s2, s1);
    rep.definition_holds = rep.violating_triples == 0;
    rep.worst_violation = std::max(0.0, rep.worst_gap - eps);

    for (std::size_t i = 0; i <= grid; ++i) {
        const double t = static_cast<double>(i) * h;
        rep.worst_identity_gap = std::max(rep.worst_identity_gap, std::abs(s1[i] - t));
        rep.worst_identity_gap = std::max(rep.worst_identity_gap, std::abs(s2[i] - t));
    }
    rep.consequence_holds = rep.definition_holds && rep.worst_identity_gap < eps;
    return rep;
}

bool group_isometry_check(const ComplexMatrix& d, double t, const std::vector<cplx>& xi) {
    if (xi.size() != d.dim()) throw std::invalid_argument("group_isometry_check: dimension mismatch");
    DiracCalculus calc(d);
    const ComplexMatrix u = calc.unitary_group(t);
    const std::vector<cplx> uxi = matvec(u, xi);
    const double g0 = graph_norm(d, xi);
    const double g1 = graph_norm(d, uxi);
    return std::abs(g1 - g0) <= 1e-9 * g0;
}

std::pair<double, double> unitary_displacement(const DiracCalculus& calc, double s, double t,
                                               const std::vector<cplx>& xi) {
    const std::vector<cplx> a = matvec(calc.unitary_group(s), xi);
    const std::vector<cplx> b = matvec(calc.unitary_group(t), xi);
    std::vector<cplx> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return {vec_norm(diff), std::abs(s - t)};
}

}  // namespace ncg
