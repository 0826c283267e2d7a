#pragma once

#include "vdlab/laxcore.hpp"
#include "vdlab/ode.hpp"
#include "vdlab/types.hpp"

namespace vdlab {

/// Hamiltonian H = sum_a cosh(theta_a) u_a; equals tr(L)/2.
double hamiltonian(const PhasePoint& p, const CouplingParams& c);

struct Motion {
    Vec dlambda;
    Vec dtheta;
};

/// Right-hand side of the flow:
///   dlambda_a/dt = sinh(theta_a) u_a,
///   dtheta_a/dt  = -sum_c cosh(theta_c) u_c dln(u_c)/dlambda_a,
/// with the logarithmic derivatives in closed form.
Motion equations_of_motion(const PhasePoint& p, const CouplingParams& c);

/// The matrices entering the second half of the Lax pair.
///
/// D is the diagonal of (L - L^{-1})/2 (entries sinh(Theta_j) u_j), Y its
/// off-diagonal part, Z_{kl} = Y_{kl}/sinh(Lambda_k - Lambda_l),
/// Bperp_{kl} = -coth(Lambda_k - Lambda_l) Y_{kl}, Bm the diagonal of the
/// i M_a (period n), and B = Bm + Bperp. B is anti-Hermitian and commutes
/// with the involution matrix.
struct BMatrixBundle {
    Vec D;       // diagonal entries of D
    CMat Y;      // Hermitian, zero diagonal
    CMat Z;      // anti-Hermitian, zero diagonal
    CMat Bm;     // diagonal, purely imaginary entries
    CMat Bperp;  // anti-Hermitian, zero diagonal
    CMat B;      // Bm + Bperp
};

BMatrixBundle build_b_bundle(const PhasePoint& p, const CouplingParams& c);

/// The N logarithmic derivatives phi_k with X_H[F_k] = phi_k F_k.
CVec f_log_derivative(const PhasePoint& p, const CouplingParams& c);

using IntegratorStats = ode::StepStats;

/// Time-stamped flow samples with per-sample diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<double> energy;
    std::vector<Vec> theta_hat;
    IntegratorStats stats;

    std::size_t size() const { return times.size(); }
};

/// Integrates the flow from the state p0 at t0 up to t1 (either direction),
/// sampling every out_dt. Every emitted point satisfies the chamber
/// invariants; relative energy drift stays within 100*tol.
///
/// Throws StepFailure on controller underflow and DomainExit if an accepted
/// state leaves the Weyl chamber. tol must lie in [1e-13, 1e-4].
Trajectory integrate(const PhasePoint& p0, const CouplingParams& c, double t0, double t1,
                     double out_dt, double tol);

/// Trajectory through p0 at time zero spanning [tmin, tmax] with
/// tmin <= 0 <= tmax: the backward and forward integrations are merged into
/// one ascending-time sample sequence.
Trajectory integrate_window(const PhasePoint& p0, const CouplingParams& c, double tmin,
                            double tmax, double out_dt, double tol);

/// Max-norm residual of the Lax representation,
///   (L(p_+) - L(p_-))/(2h) - [L(p), B(p)],
/// relative to the commutator scale, with p_+- obtained by integrating the
/// flow to +-h at tolerance h^3. Decays as O(h^2).
double lax_residual(const PhasePoint& p, const CouplingParams& c, double h);

namespace detail {
/// d ln(u_c)/d lambda_a as an n x n matrix indexed (c, a).
Mat log_derivative_matrix(const Vec& lambda, const CouplingParams& c);
}  // namespace detail

}  // namespace vdlab
