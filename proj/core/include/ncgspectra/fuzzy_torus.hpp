#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncgspectra/matrix.hpp"

namespace ncg {

// Clock/shift pair: U = diag(exp(2i pi k/n)), V the cyclic shift with
// V[k, (k+1) mod n] = 1; they satisfy V U = exp(2i pi/n) U V and U^n = V^n = 1.
ComplexMatrix clock(std::size_t n);
ComplexMatrix shift(std::size_t n);

// Hermitian Euclidean Clifford quadruple, fixed convention:
//   gamma_a = sigma2 (x) sigma_a  (a = 1,2,3),   gamma_4 = sigma3 (x) I2.
// gamma5 := gamma1 gamma2 gamma3 gamma4 = -sigma1 (x) I2 anticommutes with
// each gamma_a and gives the exact chirality symmetry of the Dirac matrix.
std::array<ComplexMatrix, 4> gamma_matrices();
ComplexMatrix gamma_five();

struct FuzzyTorusTriple {
    std::size_t n = 0;
    double dirac_scale = 1.0;  // c in D = c * (n/2pi) sum_i ad_{X_i} (x) gamma_i
    ComplexMatrix dirac;       // dim 4 n^2
    ComplexMatrix clock;       // U_n
    ComplexMatrix shift;       // V_n
    std::array<ComplexMatrix, 4> gammas;
};

// Same triple with its Dirac matrix multiplied by c; Lipschitz seminorms and
// distances computed against the scaled triple see the scaled operator.
FuzzyTorusTriple scaled_triple(const FuzzyTorusTriple& t, double c);

// Dirac matrix of a |-> (n/2pi) sum_i [X_i, a] (x) gamma_i on H_n (x) C^4,
// X = (Re U, Im U, Re V, Im V), H_n = n x n matrices with <a,b> = Tr(a* b).
// H_n is identified with C^{n^2} by column-major vec, under which
// vec(Xa) = (I (x) X) vec(a) and vec(aX) = (X^T (x) I) vec(a), so
// ad_X = I (x) X - X^T (x) I and dirac = (n/2pi) sum_i kron(ad_{X_i}, gamma_i).
FuzzyTorusTriple dirac_fuzzy(std::size_t n);

// Representation of the algebra element a on the full space: kron(I (x) a, I4),
// i.e. left multiplication on H_n tensored with the spinor identity.
ComplexMatrix represent(const FuzzyTorusTriple& t, const ComplexMatrix& a);

struct ClosedFormSpectrum {
    std::vector<double> values;        // sorted, 4 n^2 entries
    std::size_t discarded_branches;    // index/sign branches with negative radicand
    std::string convention;            // the resolved convention, for bundle metadata
};

// Resolved closed form for sigma(D_n), frozen after empirical multiset
// matching against eigh (exact to ~1e-14 for n = 2..12):
//   lambda(m,k,inner,outer) = outer * (n/2pi) * sqrt(A + inner*sqrt(A^2-B^2))
//   A = 2(t_m^2 + t_{m+1}^2 + t_k^2 + t_{k+1}^2)
//   B = 4(t_m t_{m+1} + t_k t_{k+1}),  t_j = sin(pi j/n)
// over m, k in {0..n-1}, inner and outer in {+1,-1}. A >= |B| holds for every
// (m,k), so no branch is discarded in exact arithmetic; the count is reported
// anyway per the operation contract.
ClosedFormSpectrum fuzzy_spectrum_closed_form(std::size_t n);

extern const char* const kClosedFormConvention;

struct LimitSpectrum {
    std::vector<double> values;                 // sorted, deduplicated
    std::map<double, std::uint64_t> generators; // value -> count of (m,k,+-,+-) tuples
};

// Limit spectrum closed form evaluated over m, k in {0..index_max} and all
// four sign combinations:
//   +- sqrt(m^2 + k + k^2 + 1 - m +- sqrt(2m^2 - 2m + 2k + 2k^2 + 1)),
// keeping real outputs. Values are deduplicated with tolerance 1e-12 and the
// generator count per value is returned.
LimitSpectrum limit_spectrum(std::size_t index_max);

}  // namespace ncg
