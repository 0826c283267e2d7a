#include "vdlab/extensions.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "vdlab/dynamics.hpp"
#include "vdlab/hyperbolic.hpp"
#include "vdlab/invariants.hpp"
#include "vdlab/laxcore.hpp"
#include "vdlab/ode.hpp"
#include "vdlab/random.hpp"

namespace vdlab {

Complex phi(Complex x, Complex eta) {
    const Complex sx = std::sinh(x);
    const Complex se = std::sinh(eta);
    if (std::abs(sx) < 1e-14) throw PoleError("phi: x at a pole of coth");
    if (std::abs(se) < 1e-14) throw PoleError("phi: eta at a pole of coth");
    const Complex coth_x = std::cosh(x) / sx;
    const Complex coth_e = std::cosh(eta) / se;
    return std::exp(x * coth_e) * (coth_x - coth_e);
}

SpectralLax build_spectral_lax(const PhasePoint& p, const CouplingParams& c, Complex eta) {
    const LaxBundle lb = build_bundle(p, c);
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const DoubledIndex d = DoubledIndex::from(p);
    const Complex i_smu(0.0, std::sin(c.mu));
    const Complex i_smn(0.0, std::sin(c.mu - c.nu));

    SpectralLax sl;
    sl.eta = eta;
    sl.matrix.resize(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            Complex num = i_smu * lb.F[k] * std::conj(lb.F[l]);
            if ((k + n) % N == l % N) num += i_smn;
            sl.matrix(k, l) =
                num * phi(Complex(d.Lambda[k] - d.Lambda[l], c.mu), eta);
        }
    }
    return sl;
}

ThreeParamLax build_three_param_lax(const PhasePoint& p, const CouplingParams& c) {
    if (!c.kappa) throw ValidationError({"three-parameter Lax requires kappa"});
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const double sk2 = std::sin(*c.kappa) * std::sin(*c.kappa);

    ThreeParamLax tl;
    tl.h = CMat::Zero(N, N);
    tl.h_inv = CMat::Zero(N, N);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double sh = std::sinh(2.0 * p.lambda[a]);
        const double root = std::sqrt(1.0 + sk2 / (sh * sh));
        const double alpha = std::sqrt(0.5 * (1.0 + root));
        const Complex beta(0.0, std::sqrt(0.5 * (root - 1.0)));
        tl.h(a, a) = alpha;
        tl.h(n + a, n + a) = alpha;
        tl.h(a, n + a) = beta;
        tl.h(n + a, a) = -beta;
        // each 2x2 block [alpha, beta; -beta, alpha] has alpha^2 + beta^2 = 1
        tl.h_inv(a, a) = alpha;
        tl.h_inv(n + a, n + a) = alpha;
        tl.h_inv(a, n + a) = -beta;
        tl.h_inv(n + a, a) = beta;
    }
    const LaxBundle lb = build_bundle(p, c);
    tl.Ltilde = tl.h_inv * lb.L * tl.h_inv;
    return tl;
}

double three_param_hamiltonian(const PhasePoint& p, const CouplingParams& c) {
    return 0.5 * build_three_param_lax(p, c).Ltilde.trace().real();
}

double three_param_h1(const PhasePoint& p, const CouplingParams& c) {
    if (!c.kappa) throw ValidationError({"three-parameter H_1 requires kappa"});
    const Eigen::Index n = p.n();
    const LaxBundle lb = build_bundle(p, c);
    const double sk2 = std::sin(*c.kappa) * std::sin(*c.kappa);
    double h1 = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        const double sh = std::sinh(2.0 * p.lambda[a]);
        h1 += 2.0 * std::cosh(p.theta[a]) * lb.u[a] * std::sqrt(1.0 + sk2 / (sh * sh));
        h1 += 2.0 * (lb.z[a] * sinh_ri(2.0 * p.lambda[a], *c.kappa)).real() / sh;
    }
    return h1;
}

PhasePoint integrate_three_param_flow(const PhasePoint& p0, const CouplingParams& c, double t1,
                                      double tol) {
    p0.validate();
    c.validate();
    const Eigen::Index n = p0.n();
    // gradient flow of tr(Ltilde)/2 by central differences; no closed-form
    // equations of motion exist for the kappa family
    const auto rhs = [&c, n](double, const Vec& y, Vec& dy) {
        dy.resize(2 * n);
        PhasePoint q(y.head(n), y.tail(n));
        for (Eigen::Index a = 0; a < n; ++a) {
            const double ht = 1e-6 * std::max(1.0, std::abs(q.theta[a]));
            PhasePoint qp = q, qm = q;
            qp.theta[a] += ht;
            qm.theta[a] -= ht;
            dy[a] = (three_param_hamiltonian(qp, c) - three_param_hamiltonian(qm, c)) / (2.0 * ht);
            const double hl = 1e-6 * std::max(1.0, std::abs(q.lambda[a]));
            qp = q;
            qm = q;
            qp.lambda[a] += hl;
            qm.lambda[a] -= hl;
            dy[n + a] =
                -(three_param_hamiltonian(qp, c) - three_param_hamiltonian(qm, c)) / (2.0 * hl);
        }
    };
    Vec y0(2 * n);
    y0.head(n) = p0.lambda;
    y0.tail(n) = p0.theta;
    const Vec yT = ode::integrate_to(rhs, y0, 0.0, t1, tol);
    PhasePoint out(yT.head(n), yT.tail(n));
    out.validate();
    return out;
}

CVec sorted_eigenvalues(const CMat& m) {
    Eigen::ComplexEigenSolver<CMat> es(m, false);
    if (es.info() != Eigen::Success) throw EigensolveFailure("complex eigensolve failed");
    CVec ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), [](Complex a, Complex b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    return ev;
}

namespace {

/// Greedy nearest-neighbor matching distance between two eigenvalue sets;
/// robust against order swaps induced by small perturbations.
double matched_distance(const CVec& a, const CVec& b) {
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index bj = -1;
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double d = std::abs(a[i] - b[j]);
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        used[static_cast<std::size_t>(bj)] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

/// Modulus of the k-th (modulus-sorted) eigenvalue as a phase-space observable.
Observable modulus_observable(const CouplingParams& c, Complex eta, Eigen::Index k) {
    return [&c, eta, k](const PhasePoint& q) {
        return std::abs(sorted_eigenvalues(build_spectral_lax(q, c, eta).matrix)[k]);
    };
}

int worker_count() {
    if (const char* env = std::getenv("VDLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

ConjectureCell run_spectral_cell(Eigen::Index n, const CouplingParams& c, Complex eta,
                                 std::uint64_t cell_seed, double cons_thresh, double inv_thresh) {
    std::mt19937_64 rng(cell_seed);
    const PhasePoint p0 = random_phase_point(rng, n);

    ConjectureCell cell;
    cell.eta = eta;
    cell.seed = cell_seed;

    const CVec e0 = sorted_eigenvalues(build_spectral_lax(p0, c, eta).matrix);
    const Trajectory traj = integrate(p0, c, 0.0, 2.0, 0.5, 1e-11);
    double drift = 0.0;
    for (const PhasePoint& q : traj.points) {
        const CVec e = sorted_eigenvalues(build_spectral_lax(q, c, eta).matrix);
        drift = std::max(drift, matched_distance(e0, e));
    }
    cell.conservation_residual = drift;

    double inv = 0.0;
    for (Eigen::Index a = 0; a < 2 * n; ++a)
        for (Eigen::Index b = a + 1; b < 2 * n; ++b)
            inv = std::max(inv, std::abs(poisson_bracket(modulus_observable(c, eta, a),
                                                         modulus_observable(c, eta, b), p0,
                                                         1e-4)));
    cell.involution_residual = inv;
    cell.pass = drift < cons_thresh && inv < inv_thresh;
    return cell;
}

ConjectureCell run_three_param_cell(Eigen::Index n, const CouplingParams& c,
                                    std::uint64_t cell_seed, double cons_thresh) {
    std::mt19937_64 rng(cell_seed);
    const PhasePoint p0 = random_phase_point(rng, n);

    ConjectureCell cell;
    cell.eta = Complex(0, 0);
    cell.three_param = true;
    cell.seed = cell_seed;

    const auto eigs = [&](const PhasePoint& q) {
        return sorted_eigenvalues(build_three_param_lax(q, c).Ltilde);
    };
    const CVec e0 = eigs(p0);
    double drift = 0.0;
    for (int s = 1; s <= 4; ++s) {
        const PhasePoint q = integrate_three_param_flow(p0, c, 0.5 * s, 1e-11);
        drift = std::max(drift, matched_distance(e0, eigs(q)));
    }
    cell.conservation_residual = drift;
    cell.involution_residual = 0.0;
    cell.pass = drift < cons_thresh;
    return cell;
}

}  // namespace

ConjectureReport conjecture_report(Eigen::Index n, const CouplingParams& c,
                                   const std::vector<Complex>& etas, int trials,
                                   std::uint64_t seed) {
    c.validate();
    ConjectureReport rep;
    const std::size_t n_spectral = etas.size() * static_cast<std::size_t>(trials);
    const std::size_t n_cells = n_spectral + (c.kappa ? static_cast<std::size_t>(trials) : 0);
    rep.cells.resize(n_cells);

    const auto run_cell = [&](std::size_t idx) {
        const std::uint64_t cell_seed = seed + 1000003ull * (idx + 1);
        if (idx < n_spectral) {
            const std::size_t ei = idx / static_cast<std::size_t>(trials);
            rep.cells[idx] = run_spectral_cell(n, c, etas[ei], cell_seed,
                                               rep.conservation_threshold,
                                               rep.involution_threshold);
        } else {
            rep.cells[idx] =
                run_three_param_cell(n, c, cell_seed, rep.conservation_threshold);
        }
    };

    const int workers = std::min<int>(worker_count(), static_cast<int>(n_cells));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n_cells) break;
                    run_cell(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& cell : rep.cells) rep.all_pass = rep.all_pass && cell.pass;
    return rep;
}

}  // namespace vdlab
