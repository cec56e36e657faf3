#include "ncgspectra/quantum_metric.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "ncgspectra/eigh.hpp"

namespace ncg {

namespace {
constexpr double kIdenticalTol = 1e-13;
constexpr double kWitnessSlack = 1e-10;

void validate_density(const ComplexMatrix& rho) {
    if (!hermitian(rho)) throw std::invalid_argument("DensityState: rho is not Hermitian");
    double tr = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) tr += rho(i, i).real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("DensityState: trace must be 1 to 1e-10");
    const std::vector<double> ev = eigh_values(rho);
    if (!ev.empty() && ev.front() < -1e-10)
        throw std::invalid_argument("DensityState: not positive semidefinite to 1e-10");
}

std::array<ComplexMatrix, 4> coordinate_matrices(const FuzzyTorusTriple& t) {
    auto re = [](const ComplexMatrix& m) {
        ComplexMatrix r = m;
        ComplexMatrix d = m.dagger();
        r += d;
        r *= 0.5;
        return r;
    };
    auto im = [](const ComplexMatrix& m) {
        ComplexMatrix r = m;
        ComplexMatrix d = m.dagger();
        r -= d;
        r *= cplx{0.0, -0.5};
        return r;
    };
    return {re(t.clock), im(t.clock), re(t.shift), im(t.shift)};
}

double triple_kappa(const FuzzyTorusTriple& t) {
    return t.dirac_scale * static_cast<double>(t.n) / (2.0 * std::numbers::pi);
}

// kappa * sum_i kron(kron(I, [X_i, a]), gamma_i); anti-Hermitian for Hermitian a
ComplexMatrix lip_operator(const FuzzyTorusTriple& t, const ComplexMatrix& a) {
    const std::size_t n = t.n;
    const double kappa = triple_kappa(t);
    const std::array<ComplexMatrix, 4> xs = coordinate_matrices(t);
    ComplexMatrix c(4 * n * n);
    for (int i = 0; i < 4; ++i) {
        const ComplexMatrix com = commutator(xs[i], a);
        const ComplexMatrix& g = t.gammas[i];
        for (std::size_t blk = 0; blk < n; ++blk)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t q = 0; q < n; ++q) {
                    const cplx w = kappa * com(r, q);
                    if (w == cplx{}) continue;
                    const std::size_t row0 = (blk * n + r) * 4;
                    const std::size_t col0 = (blk * n + q) * 4;
                    for (std::size_t s = 0; s < 4; ++s)
                        for (std::size_t u = 0; u < 4; ++u) {
                            const cplx gv = g(s, u);
                            if (gv == cplx{}) continue;
                            c(row0 + s, col0 + u) += w * gv;
                        }
                }
    }
    return c;
}

// i * lip_operator, Hermitian
ComplexMatrix lip_hermitian(const FuzzyTorusTriple& t, const ComplexMatrix& a) {
    ComplexMatrix m = lip_operator(t, a);
    m *= cplx{0.0, 1.0};
    return m;
}

double frob(const ComplexMatrix& m) { return m.frobenius_norm(); }

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            s += a(i, j).real() * b(i, j).real() + a(i, j).imag() * b(i, j).imag();
    return s;
}

double pairing(const ComplexMatrix& drho, const ComplexMatrix& a) {
    cplx s{};
    for (std::size_t i = 0; i < drho.dim(); ++i)
        for (std::size_t k = 0; k < drho.dim(); ++k) s += drho(i, k) * a(k, i);
    return s.real();
}

void hermitize(ComplexMatrix& a) {
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
}

void trace_project(ComplexMatrix& a) {
    const std::size_t n = a.dim();
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += a(i, i).real();
    const double shift = tr / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;
}

// one Box-Muller pair per call, from the high 53 bits of the generator
void normal_pair(std::mt19937_64& gen, double& z1, double& z2) {
    const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    z1 = r * std::cos(2.0 * std::numbers::pi * u2);
    z2 = r * std::sin(2.0 * std::numbers::pi * u2);
}

ComplexMatrix random_traceless_direction(std::mt19937_64& gen, std::size_t n) {
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double x, y;
            normal_pair(gen, x, y);
            a(i, j) = cplx{x, y};
        }
    hermitize(a);
    trace_project(a);
    const double f = frob(a);
    if (f > 0.0) a *= 1.0 / f;
    return a;
}

struct TopPair {
    std::vector<cplx> u, v;
    double sigma = 0.0;
};

// Top singular pair of the anti-Hermitian lip operator C via its Hermitian
// companion M = iC: power iteration on M^2 (the spectrum of M is symmetric,
// so the dominant M^2 eigenspace is split into a signed eigenvector of M).
TopPair top_singular_pair(const ComplexMatrix& m, std::vector<cplx>& warm) {
    const std::size_t dim = m.dim();
    TopPair out;
    if (warm.size() != dim) {
        warm.assign(dim, cplx{});
        warm[0] = cplx{1.0, 0.0};
    }
    std::vector<cplx> w = warm;
    double nw = vec_norm(w);
    if (nw < 1e-300) {
        w.assign(dim, cplx{});
        w[0] = cplx{1.0, 0.0};
        nw = 1.0;
    }
    for (auto& z : w) z /= nw;

    bool converged = false;
    double mu2 = 0.0;
    for (int it = 0; it < 500; ++it) {
        std::vector<cplx> y = matvec(m, matvec(m, w));
        const cplx ray = vec_dot(w, y);
        mu2 = ray.real();
        double resid2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const cplx r = y[i] - mu2 * w[i];
            resid2 += std::norm(r);
        }
        const double ny = vec_norm(y);
        if (ny < 1e-300) {
            out.sigma = 0.0;
            warm = w;
            return out;
        }
        for (std::size_t i = 0; i < dim; ++i) w[i] = y[i] / ny;
        if (std::sqrt(resid2) <= 1e-12 * std::max(mu2, 1e-300)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        const HermitianEigenDecomposition e = eigh(m);
        const std::size_t lo = 0, hi = dim - 1;
        const std::size_t pick =
            std::abs(e.eigenvalues[lo]) > std::abs(e.eigenvalues[hi]) ? lo : hi;
        const double mu = e.eigenvalues[pick];
        std::vector<cplx> z = e.eigenvector(pick);
        out.sigma = std::abs(mu);
        out.v = z;
        out.u.resize(dim);
        const cplx phase = (mu >= 0.0) ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
        for (std::size_t i = 0; i < dim; ++i) out.u[i] = phase * z[i];
        warm = std::move(z);
        return out;
    }

    const double mu = std::sqrt(std::max(mu2, 0.0));
    std::vector<cplx> mw = matvec(m, w);
    std::vector<cplx> zp(dim), zm(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        zp[i] = mw[i] + mu * w[i];
        zm[i] = mw[i] - mu * w[i];
    }
    const double np2 = vec_norm(zp), nm2 = vec_norm(zm);
    const bool plus = np2 >= nm2;
    std::vector<cplx>& z = plus ? zp : zm;
    const double nz = plus ? np2 : nm2;
    for (auto& c : z) c /= nz;
    out.sigma = mu;
    out.v = z;
    out.u.resize(dim);
    const cplx phase = plus ? cplx{0.0, -1.0} : cplx{0.0, 1.0};
    for (std::size_t i = 0; i < dim; ++i) out.u[i] = phase * z[i];
    warm = w;
    return out;
}

// Euclidean gradient of sigma_top(C(a)) on Hermitian traceless a:
// K_i[q,r] = sum_{blk,s,t} conj(u[(blk n + r) 4 + s]) gamma_i[s,t] v[(blk n + q) 4 + t],
// G = kappa sum_i (K_i X_i - X_i K_i), hermitized and trace-projected.
ComplexMatrix lip_gradient(const FuzzyTorusTriple& t, const TopPair& p,
                           const std::array<ComplexMatrix, 4>& xs) {
    const std::size_t n = t.n;
    const double kappa = triple_kappa(t);
    ComplexMatrix grad(n);
    for (int i = 0; i < 4; ++i) {
        const ComplexMatrix& g = t.gammas[i];
        ComplexMatrix k(n);
        for (std::size_t blk = 0; blk < n; ++blk)
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t q = 0; q < n; ++q) {
                    cplx acc{};
                    const std::size_t iu = (blk * n + r) * 4;
                    const std::size_t iv = (blk * n + q) * 4;
                    for (std::size_t s = 0; s < 4; ++s) {
                        if (p.u[iu + s] == cplx{}) continue;
                        for (std::size_t w = 0; w < 4; ++w) {
                            const cplx gv = g(s, w);
                            if (gv == cplx{}) continue;
                            acc += std::conj(p.u[iu + s]) * gv * p.v[iv + w];
                        }
                    }
                    k(q, r) += acc;
                }
        ComplexMatrix term = k * xs[i];
        term -= xs[i] * k;
        grad += term;
    }
    grad *= kappa;
    hermitize(grad);
    trace_project(grad);
    return grad;
}

struct RestartOutcome {
    double value = 0.0;
    double num = 0.0;
    double lip_certified = 0.0;
    ComplexMatrix a;
    std::size_t steps = 0;
    bool null_direction = false;
};

RestartOutcome run_restart(const FuzzyTorusTriple& t, const ComplexMatrix& drho,
                           const MKConfig& cfg, std::uint64_t restart_seed) {
    const std::size_t n = t.n;
    std::mt19937_64 gen(restart_seed);
    const std::array<ComplexMatrix, 4> xs = coordinate_matrices(t);

    ComplexMatrix a = random_traceless_direction(gen, n);
    {
        const double s = pairing(drho, a);
        if (s < 0.0) a *= -1.0;
    }

    RestartOutcome out;
    std::vector<cplx> warm;
    for (std::size_t k = 1; k <= cfg.iterations; ++k) {
        double num = pairing(drho, a);
        if (num < 0.0) {
            a *= -1.0;
            num = -num;
        }
        const ComplexMatrix m = lip_hermitian(t, a);
        const TopPair pair = top_singular_pair(m, warm);
        ++out.steps;
        if (pair.sigma < 1e-12) break;
        const ComplexMatrix gh = lip_gradient(t, pair, xs);
        ComplexMatrix g = drho;
        g *= pair.sigma;
        ComplexMatrix sub = gh;
        sub *= num;
        g -= sub;
        g *= 1.0 / (pair.sigma * pair.sigma);
        hermitize(g);
        const double proj = real_inner(a, g);
        ComplexMatrix tang = a;
        tang *= proj;
        g -= tang;
        const double gn = frob(g);
        if (gn < 1e-14) break;
        g *= cfg.step_c / (std::sqrt(static_cast<double>(k)) * gn);
        a += g;
        trace_project(a);
        const double f = frob(a);
        if (f < 1e-300) break;
        a *= 1.0 / f;
    }

    out.num = std::abs(pairing(drho, a));
    out.lip_certified = operator_norm(lip_hermitian(t, a));
    out.a = a;
    if (out.lip_certified <= cfg.null_tol) {
        if (out.num > cfg.null_tol) {
            out.null_direction = true;
            out.value = std::numeric_limits<double>::infinity();
        } else {
            out.value = 0.0;
        }
    } else {
        out.value = out.num / out.lip_certified;
    }
    return out;
}
}  // namespace

DensityState::DensityState(ComplexMatrix m) : rho(std::move(m)) { validate_density(rho); }

DensityState DensityState::vector_state(std::size_t n, std::size_t basis_index) {
    if (basis_index >= n) throw std::invalid_argument("vector_state: index out of range");
    ComplexMatrix r(n);
    r(basis_index, basis_index) = cplx{1.0, 0.0};
    return DensityState(std::move(r));
}

DensityState DensityState::maximally_mixed(std::size_t n) {
    if (n == 0) throw std::invalid_argument("maximally_mixed: n must be positive");
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) = cplx{1.0 / static_cast<double>(n), 0.0};
    return DensityState(std::move(r));
}

double lip_seminorm(const FuzzyTorusTriple& t, const ComplexMatrix& a) {
    if (a.dim() != t.n) throw std::invalid_argument("lip_seminorm: element dim must equal n");
    if (!hermitian(a)) throw std::invalid_argument("lip_seminorm: element must be Hermitian");
    return operator_norm(lip_hermitian(t, a));
}

MKResult mk_distance(const FuzzyTorusTriple& t, const DensityState& phi,
                     const DensityState& psi, const MKConfig& config) {
    if (phi.rho.dim() != t.n || psi.rho.dim() != t.n)
        throw std::invalid_argument("mk_distance: state dims must equal n");
    validate_density(phi.rho);
    validate_density(psi.rho);
    if (config.restarts == 0 || config.iterations == 0)
        throw std::invalid_argument("mk_distance: restarts and iterations must be positive");

    ComplexMatrix drho = phi.rho;
    drho -= psi.rho;

    MKResult res;
    res.witness = ComplexMatrix(t.n);
    if (drho.max_abs() <= kIdenticalTol) {
        res.converged = true;
        return res;
    }

    std::vector<std::future<RestartOutcome>> futs;
    futs.reserve(config.restarts);
    for (std::size_t rs = 0; rs < config.restarts; ++rs) {
        const std::uint64_t rseed = config.seed ^ (0x9E3779B97F4A7C15ULL * (rs + 1));
        futs.push_back(std::async(std::launch::async, run_restart, std::cref(t),
                                  std::cref(drho), std::cref(config), rseed));
    }

    std::vector<RestartOutcome> outcomes;
    outcomes.reserve(config.restarts);
    for (auto& f : futs) outcomes.push_back(f.get());

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i)
        if (outcomes[i].value > outcomes[best].value) best = i;
    for (const auto& o : outcomes) res.iterations += o.steps;

    const RestartOutcome& b = outcomes[best];
    if (b.null_direction) {
        res.unbounded_direction_detected = true;
        res.estimate = std::numeric_limits<double>::infinity();
        res.lower_bound = std::numeric_limits<double>::infinity();
        res.witness = b.a;
        return res;
    }
    res.estimate = b.value;
    const double rescale = b.lip_certified * (1.0 + kWitnessSlack);
    res.witness = b.a;
    res.witness *= 1.0 / rescale;
    res.lower_bound = b.num / rescale;
    res.converged = res.estimate > 0.0;
    return res;
}

double mk_bruteforce_oracle(const FuzzyTorusTriple& t, const DensityState& phi,
                            const DensityState& psi, std::size_t samples,
                            std::uint64_t seed) {
    if (t.n > 3) throw std::invalid_argument("mk_bruteforce_oracle: n must be at most 3");
    if (phi.rho.dim() != t.n || psi.rho.dim() != t.n)
        throw std::invalid_argument("mk_bruteforce_oracle: state dims must equal n");
    if (samples == 0) throw std::invalid_argument("mk_bruteforce_oracle: samples must be positive");
    const std::size_t n = t.n;
    ComplexMatrix drho = phi.rho;
    drho -= psi.rho;
    if (drho.max_abs() <= kIdenticalTol) return 0.0;

    auto ratio = [&](const ComplexMatrix& a) -> double {
        const double l = operator_norm(lip_hermitian(t, a));
        if (l <= 1e-12) return 0.0;
        return std::abs(pairing(drho, a)) / l;
    };

    std::mt19937_64 gen(seed);
    std::vector<std::pair<double, ComplexMatrix>> cands;
    cands.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        ComplexMatrix a = random_traceless_direction(gen, n);
        cands.emplace_back(ratio(a), std::move(a));
    }
    std::sort(cands.begin(), cands.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    double best = cands.front().first;

    std::vector<ComplexMatrix> basis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ComplexMatrix e(n);
            e(i, j) = cplx{1.0 / std::sqrt(2.0), 0.0};
            e(j, i) = cplx{1.0 / std::sqrt(2.0), 0.0};
            basis.push_back(e);
            ComplexMatrix f(n);
            f(i, j) = cplx{0.0, 1.0 / std::sqrt(2.0)};
            f(j, i) = cplx{0.0, -1.0 / std::sqrt(2.0)};
            basis.push_back(f);
        }
    for (std::size_t i = 1; i < n; ++i) {
        ComplexMatrix e(n);
        for (std::size_t j = 0; j < i; ++j) e(j, j) = cplx{1.0, 0.0};
        e(i, i) = cplx{-static_cast<double>(i), 0.0};
        e *= 1.0 / frob(e);
        basis.push_back(e);
    }

    const std::size_t refine = std::min<std::size_t>(5, cands.size());
    for (std::size_t c = 0; c < refine; ++c) {
        ComplexMatrix a = cands[c].second;
        double v = cands[c].first;
        double step = 0.3;
        for (int sweep = 0; sweep < 60; ++sweep) {
            bool improved = false;
            for (const ComplexMatrix& e : basis)
                for (const double sgn : {1.0, -1.0}) {
                    ComplexMatrix at = a;
                    ComplexMatrix d = e;
                    d *= sgn * step;
                    at += d;
                    trace_project(at);
                    const double f = frob(at);
                    if (f < 1e-12) continue;
                    at *= 1.0 / f;
                    const double vt = ratio(at);
                    if (vt > v) {
                        a = std::move(at);
                        v = vt;
                        improved = true;
                    }
                }
            if (!improved) {
                step *= 0.5;
                if (step < 1e-6) break;
            }
        }
        best = std::max(best, v);
    }
    return best;
}

}  // namespace ncg
