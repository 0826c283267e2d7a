#pragma once

#include "vdlab/dynamics.hpp"
#include "vdlab/types.hpp"

namespace vdlab {

/// Asymptotic data of the free asymptotes lambda_a(t) ~ t sinh(theta_a+-) + lambda_a+-.
struct ScatteringData {
    Vec theta_plus;    // descending, positive
    Vec lambda_plus;
    Vec theta_minus;   // = -theta_plus
    Vec lambda_minus;
};

/// theta_a+ = 2 theta_hat_a from the Lax spectrum.
Vec asymptotic_momenta(const PhasePoint& p, const CouplingParams& c);

/// The forward phases lambda_a+ = (1/2) log(m_a / m_{a-1}) from the leading
/// principal minors m_a of the upper-left n x n block of the asymptotic
/// reference matrix (the eigenbasis-transformed e^{2 Lambda}, block-flipped).
/// The half-log-quotient normalization was frozen after matching the
/// trajectory-tail oracle; no additive constant is needed.
/// Throws MinorNonPositive if a required minor fails to be positive.
Vec asymptotic_phases(const PhasePoint& p, const CouplingParams& c);

/// Full asymptotic data; the backward phases come from the minors of the
/// index-reversed reference matrix, the backward momenta from the sign flip.
ScatteringData scattering_data(const PhasePoint& p, const CouplingParams& c);

/// Tail comparison of a trajectory against its free asymptotes.
struct AsymptoticsReport {
    Vec max_deviation_plus;    // sup_a over the forward tail of |lambda_a(t) - t sinh - lambda_a+|
    Vec max_deviation_minus;
    Vec endpoint_deviation_plus;
    Vec endpoint_deviation_minus;
    Vec decay_rate_plus;       // fitted exponent of the deviation decay
    Vec decay_rate_minus;
    Vec theta_fit_plus;        // arcsinh of the tail slope
    Vec theta_fit_minus;
    Vec lambda_fit_plus;       // tail-fit intercepts (the fit-based phase estimator)
    Vec lambda_fit_minus;
};

/// Requires |t| >= 20 at both trajectory ends.
AsymptoticsReport verify_asymptotics(const Trajectory& traj, const ScatteringData& sd);

/// Least-squares line fit of lambda_a(t) over the last quarter of the
/// window: returns slope/intercept pairs (the fit-based estimator).
struct TailFit {
    Vec slope;
    Vec intercept;
};
TailFit tail_fit(const Trajectory& traj);

}  // namespace vdlab
