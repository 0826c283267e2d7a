#pragma once

#include "vdlab/types.hpp"

namespace vdlab {

/// Solves the flow at time t algebraically: lambda(t) from the spectrum of
/// A(t) = e^{Lambda0} e^{t(L0 - L0^{-1})} e^{Lambda0} and theta(t) from the
/// spectral derivative, theta_a = arcsinh(dlambda_a/dt / u_a(lambda(t))).
///
/// A(t) is never formed: its eigenvalues are the squared singular values of
/// X = e^{Lambda0} Q e^{t d/2} (with Q diag(d) Q^* = L0 - L0^{-1}), computed
/// by one-sided Jacobi so the spectrum keeps relative accuracy across its
/// exponentially wide range. The derivative comes from the right singular
/// vectors: dlambda_a/dt = (1/2) sum_k d_k |V_{k,a}|^2.
///
/// Throws DegenerateSpectrum (as SpectrumDegenerate) if the eigenvalues of
/// A(t) fail reciprocal pairing within 1e-8, EigensolveFailure on numerical
/// breakdown (including exponent overflow at extreme |t|).
PhasePoint solve_at(const PhasePoint& p0, const CouplingParams& c, double t);

/// Co-integrates the trajectory and the frame equation k' = k (Bm - Z),
/// k(0) = 1, and returns the maximum over ~10 samples of the deviation
/// | k e^{2 Lambda} k^{-1} - A(t) | relative to |A(t)| (the closed-form
/// geodesic). Also implicitly checks k stays unitary; the test suite
/// asserts k^* k = 1 and k C k^* = C along the run.
double geodesic_check(const PhasePoint& p0, const CouplingParams& c, double t1, double tol);

namespace detail {
/// The frame k(t) and phase point at time t1, co-integrated. Exposed for the
/// frame-property tests.
struct GeodesicFrame {
    PhasePoint point;
    CMat k;
};
GeodesicFrame geodesic_frame(const PhasePoint& p0, const CouplingParams& c, double t1, double tol);
}  // namespace detail

}  // namespace vdlab
