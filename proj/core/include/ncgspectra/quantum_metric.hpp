#pragma once

#include <cstdint>

#include "ncgspectra/fuzzy_torus.hpp"
#include "ncgspectra/matrix.hpp"

namespace ncg {

// Density matrix on C^n. Validated at construction: Hermitian, trace 1 to
// 1e-10, smallest eigenvalue >= -1e-10.
struct DensityState {
    ComplexMatrix rho;

    explicit DensityState(ComplexMatrix m);

    // |e_k><e_k|
    static DensityState vector_state(std::size_t n, std::size_t basis_index);
    static DensityState maximally_mixed(std::size_t n);
};

struct MKConfig {
    std::size_t restarts = 8;
    std::size_t iterations = 400;
    double step_c = 0.4;       // step schedule step_c / sqrt(k)
    std::uint64_t seed = 0;
    double null_tol = 1e-8;
};

struct MKResult {
    // |Tr((rho_phi - rho_psi) witness)| with Lip(witness) <= 1; a certified
    // lower bound for the distance. estimate is the best raw ratio seen and
    // satisfies lower_bound <= estimate.
    double lower_bound = 0.0;
    double estimate = 0.0;
    ComplexMatrix witness;     // Hermitian, traceless, Lip <= 1 + 1e-9
    std::size_t iterations = 0;
    bool converged = false;
    // A traceless direction with Lip <= null_tol but nonvanishing objective
    // was found; both bounds are +inf and witness holds the raw direction.
    bool unbounded_direction_detected = false;
};

// Lip(a) = ||[D, pi(a)]||_op, computed structurally as
// scale * (n/2pi) * || sum_i kron(I (x) [X_i, a], gamma_i) ||_op.
double lip_seminorm(const FuzzyTorusTriple& t, const ComplexMatrix& a);

// Maximizes |Tr((rho_phi - rho_psi) a)| / Lip(a) over traceless Hermitian a
// by projected subgradient ascent on the unit Frobenius sphere with random
// restarts. Restarts run concurrently with per-restart seeds; the merge is
// deterministic.
MKResult mk_distance(const FuzzyTorusTriple& t, const DensityState& phi,
                     const DensityState& psi, const MKConfig& config = {});

// Dense sampling of the traceless Hermitian Frobenius sphere followed by
// coordinate ascent refinement of the best candidates. n <= 3 only.
double mk_bruteforce_oracle(const FuzzyTorusTriple& t, const DensityState& phi,
                            const DensityState& psi, std::size_t samples,
                            std::uint64_t seed = 1);

}  // namespace ncg
