#pragma once

#include <functional>

#include "vdlab/types.hpp"

namespace vdlab {

/// The five couplings of the general hyperbolic van Diejen potentials
/// v(x) = sinh(ig + x)/sinh(x),
/// w(x) = sinh(ig0 + x)/sinh(x) cosh(ig1 + x)/cosh(x)
///        sinh(ig0' + x)/sinh(x) cosh(ig1' + x)/cosh(x).
struct VanDiejenParams {
    double g = 0.0;
    double g0 = 0.0;
    double g1 = 0.0;
    double g0p = 0.0;
    double g1p = 0.0;

    static VanDiejenParams two_parameter(const CouplingParams& c) {
        return {c.mu, c.nu / 2.0, c.nu / 2.0, 0.0, 0.0};
    }
    static VanDiejenParams three_parameter(const CouplingParams& c);
};

/// Coefficients K_0..K_N of det(L - y I) = sum_m K_{N-m} y^m, computed from
/// the eigenvalues through the stable elementary-symmetric recursion.
/// K_0 = 1 and K is palindromic (K_{N-m} = K_m).
Vec char_poly_coeffs(const CMat& L);

/// van Diejen's l-th commuting Hamiltonian by exact subset enumeration
/// (H_0 = 1, and the inner sums use U_{J^c,0} = 1). Cost grows like 4^n;
/// intended for n <= 6.
double vd_hamiltonian(const PhasePoint& p, const VanDiejenParams& vp, int l);

/// The lower-triangular factors of the linear relation K = T H between the
/// characteristic coefficients and the commuting family:
///   H = U A and K = G A over the auxiliary family A, so T = G U^{-1}.
/// U has unit diagonal, G diagonal (-1)^m.
struct RelationFactors {
    Mat U;  // (n+1) x (n+1), maps A -> H
    Mat G;  // (n+1) x (n+1), maps A -> K
    Mat T;  // G U^{-1}
};
RelationFactors relation_factors(const CouplingParams& c, int n);

/// The composed matrix T with K = T H.
Mat relation_matrix(const CouplingParams& c, int n);

using Observable = std::function<double(const PhasePoint&)>;

/// Canonical Poisson bracket sum_c (df/dlambda_c dg/dtheta_c - df/dtheta_c dg/dlambda_c)
/// by central differences with one Richardson level; per-coordinate steps
/// h_c = h max(1, |x_c|). Error O(h^4).
double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& p, double h);

/// max_{a<b} |{theta_hat_a, theta_hat_b}| at p via the numerical bracket.
double involution_check(const PhasePoint& p, const CouplingParams& c);

}  // namespace vdlab
