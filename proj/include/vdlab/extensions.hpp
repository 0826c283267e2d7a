#pragma once

#include <vector>

#include "vdlab/types.hpp"

namespace vdlab {

/// Phi(x | eta) = e^{x coth(eta)} (coth(x) - coth(eta)).
/// Throws PoleError when x or eta sits at a pole of coth (0 mod i pi).
Complex phi(Complex x, Complex eta);

/// The spectral-parameter Lax candidate with entries
///   (i sin(mu) F_k conj(F_l) + i sin(mu - nu) C_{kl}) Phi(i mu + Lambda_k - Lambda_l | eta).
/// As real eta -> infinity the matrix tends to L entrywise. Generally
/// non-Hermitian.
struct SpectralLax {
    Complex eta;
    CMat matrix;
};
SpectralLax build_spectral_lax(const PhasePoint& p, const CouplingParams& c, Complex eta);

/// The three-parameter candidate: the Hermitian block matrix h built from
/// alpha/beta of the extra coupling kappa, and Ltilde = h^{-1} L h^{-1}.
/// Both satisfy the quadratic group relation with the involution matrix.
struct ThreeParamLax {
    CMat h;
    CMat h_inv;   // exact per-particle 2x2 block inverse (blocks have det 1)
    CMat Ltilde;
};
ThreeParamLax build_three_param_lax(const PhasePoint& p, const CouplingParams& c);

/// tr(Ltilde)/2, the Hamiltonian of the kappa-deformed flow.
double three_param_hamiltonian(const PhasePoint& p, const CouplingParams& c);

/// van Diejen's main Hamiltonian for the (mu, nu, kappa) family in closed
/// form (the two-sum expression over z and u).
double three_param_h1(const PhasePoint& p, const CouplingParams& c);

/// Flow generated by tr(Ltilde)/2 via central-difference gradients of the
/// Hamiltonian (no closed-form equations of motion are available).
/// Returns the state at t1 starting from p0 at time 0.
PhasePoint integrate_three_param_flow(const PhasePoint& p0, const CouplingParams& c, double t1,
                                      double tol);

/// Eigenvalues of a general complex matrix sorted by (modulus, argument).
CVec sorted_eigenvalues(const CMat& m);

struct ConjectureCell {
    Complex eta;                    // NaN-free only for spectral-Lax cells
    bool three_param = false;       // true for Ltilde cells
    std::uint64_t seed = 0;
    double conservation_residual = 0.0;
    double involution_residual = 0.0;
    bool pass = false;
};

struct ConjectureReport {
    std::vector<ConjectureCell> cells;
    double conservation_threshold = 1e-6;
    double involution_threshold = 1e-5;
    bool all_pass = true;
};

/// Runs the conjecture harness: for each eta in the grid and each trial, a
/// random phase point is drawn from the trial seed, the flow is integrated
/// over a fixed window, and the spectral-Lax eigenvalue drift plus the
/// pairwise brackets of eigenvalue moduli are recorded. Ltilde cells do the
/// same under the kappa-deformed flow. Violations are flagged with their
/// reproduction seed, never silently dropped. Cells are distributed over
/// worker threads (capped by VDLAB_THREADS) and merged by cell index.
ConjectureReport conjecture_report(Eigen::Index n, const CouplingParams& c,
                                   const std::vector<Complex>& etas, int trials,
                                   std::uint64_t seed);

}  // namespace vdlab
