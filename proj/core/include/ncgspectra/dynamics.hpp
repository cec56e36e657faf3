#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "ncgspectra/eigh.hpp"
#include "ncgspectra/matrix.hpp"

namespace ncg {

// Scalar function descriptor for the bounded functional calculus. Gaussian
// carries its analytic Fourier transform; tabulated data may carry sampled
// Fourier data with a dominating envelope c/(1+x^2) used for tail bounds.
struct SpectralFunction {
    enum class Kind { kGaussian, kBump, kResolvent, kTabulated };

    Kind kind = Kind::kGaussian;
    double width = 1.0;                                   // gaussian: f(x) = exp(-x^2/width^2)
    double center = 0.0, radius = 1.0;                    // bump: 1 at center, support (c-r, c+r)
    cplx pole{0.0, 1.0};                                  // resolvent: f(x) = 1/(x - pole)
    std::vector<std::pair<double, double>> samples;       // tabulated (x, f(x)), linear interp

    struct FourierData {
        bool analytic_gaussian = false;                   // fhat(x) = (w/(2 sqrt pi)) e^{-(wx/2)^2}
        std::vector<std::pair<double, double>> samples;   // tabulated fhat
        double envelope_c = 0.0;                          // |fhat(x)| <= c/(1+x^2) for |x| >= from
        double envelope_from = 0.0;
    };
    std::optional<FourierData> fourier;

    static SpectralFunction gaussian(double width);
    static SpectralFunction bump(double center, double radius);
    static SpectralFunction resolvent(cplx pole);
    static SpectralFunction tabulated(std::vector<std::pair<double, double>> samples);

    bool real_valued() const { return kind != Kind::kResolvent; }
    double eval(double x) const;      // real kinds only
    cplx eval_complex(double x) const;
    double fourier_eval(double x) const;  // fhat at x; requires fourier
};

struct FourierCertificate {
    double cutoff = 0.0;              // [-M, M]
    double tail_bound = 0.0;          // integral of |fhat| outside the cutoff
    double quadrature_error = 0.0;    // accumulated Richardson estimate
    std::size_t evaluations = 0;      // quadrature nodes used
};

// Shared per-matrix eigendecomposition with at-most-once population, safe
// for concurrent readers. All calculus operations on the same matrix reuse
// the one decomposition.
class DiracCalculus {
public:
    explicit DiracCalculus(ComplexMatrix d);
    explicit DiracCalculus(ComplexMatrix d, HermitianEigenDecomposition precomputed);

    const ComplexMatrix& matrix() const { return d_; }
    const HermitianEigenDecomposition& decomposition() const;
    double op_norm() const;

    ComplexMatrix unitary_group(double t) const;
    ComplexMatrix apply_eig(const SpectralFunction& f) const;
    ComplexMatrix apply_fourier(const SpectralFunction& f, double eps,
                                FourierCertificate* cert = nullptr) const;
    double spectral_action(const SpectralFunction& f, double scale) const;
    ComplexMatrix resolvent(cplx lambda) const;

private:
    ComplexMatrix d_;
    mutable std::once_flag once_;
    mutable std::unique_ptr<HermitianEigenDecomposition> eig_;
};

// Operation-shaped free functions; each computes one eigendecomposition.
// Use DiracCalculus directly when several calls share a matrix.

// exp(itD) from the spectral decomposition; unitary to 1e-10.
ComplexMatrix unitary_group(const ComplexMatrix& d, double t);

// ||xi|| + ||D xi||
double graph_norm(const ComplexMatrix& d, const std::vector<cplx>& xi);

ComplexMatrix apply_function_eig(const ComplexMatrix& d, const SpectralFunction& f);

// Fourier-cutoff route: picks cutoff M so the analytic tail bound is at most
// eps/2, then adaptively integrates fhat(x) exp(i lambda x) over [-M, M] to
// eps/2, certifying ||result - f(D)||_op <= eps. Requires f.fourier.
ComplexMatrix apply_function_fourier(const ComplexMatrix& d, const SpectralFunction& f,
                                     double eps, FourierCertificate* cert = nullptr);

// sum_j f(lambda_j / scale) with multiplicity
double spectral_action(const ComplexMatrix& d, const SpectralFunction& f, double scale);

// (D - lambda)^{-1} for nonreal lambda; ||result||_op <= 1/|Im lambda|
ComplexMatrix resolvent(const ComplexMatrix& d, cplx lambda);

struct IsoIsoReport {
    bool definition_holds = false;
    double worst_violation = 0.0;     // max over triples of the defining gap minus eps
    double worst_gap = 0.0;           // max over triples of the defining gap
    std::size_t violating_triples = 0;
    double worst_identity_gap = 0.0;  // max |s_j(t) - t| where the definition held
    bool consequence_holds = false;   // worst_identity_gap < eps when definition holds
};

// Checks the iso-iso defining inequality
//   | |s1(x)+s1(y)-z| - |x+y-s2(z)| | < eps
// over all triples of the uniform grid {0, h, 2h, ...} on [0, 1/eps] with
// grid+1 points per axis, for both orderings (s1,s2) and (s2,s1). Samples
// must tabulate the maps on that grid with s(0) = 0 and values in [0, inf).
IsoIsoReport iso_iso_check(const std::vector<double>& s1_samples,
                           const std::vector<double>& s2_samples, double eps,
                           std::size_t grid = 200);

// true iff |graph_norm(d, U^t xi) - graph_norm(d, xi)| <= 1e-9 graph_norm(d, xi)
bool group_isometry_check(const ComplexMatrix& d, double t, const std::vector<cplx>& xi);

// ||U^s xi - U^t xi|| and the mean-value bound |s-t| (valid when the graph
// norm of xi is at most 1); returns {displacement, bound}.
std::pair<double, double> unitary_displacement(const DiracCalculus& calc, double s, double t,
                                               const std::vector<cplx>& xi);

}  // namespace ncg
