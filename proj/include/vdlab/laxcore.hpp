#pragma once

#include "vdlab/types.hpp"

namespace vdlab {

/// The Lax matrix together with its building blocks at a phase point.
///
/// Invariants (all checked by the test suite):
///   z_{n+a} = conj(z_a), u_j = |z_j|, L Hermitian positive definite,
///   L C L = C, and L_{kk} = |F_k|^2.
struct LaxBundle {
    CVec z;   // N complex constituents
    Vec u;    // their moduli
    CVec F;   // column vector entering L
    CMat L;   // N x N Hermitian Lax matrix

    Eigen::Index N() const { return L.rows(); }
    Eigen::Index n() const { return L.rows() / 2; }
};

/// The N x N involution matrix with zero n x n diagonal blocks and identity
/// off-diagonal blocks. Squares to the identity.
Mat involution_matrix(Eigen::Index n);

/// Conjugation by the involution matrix: returns C M C, which permutes the
/// two index blocks. For a bundle's Lax matrix this equals L^{-1} exactly,
/// so no generic inversion is ever needed.
CMat c_conjugate(const CMat& m);

/// The moduli u_1..u_n evaluated through the real product form. Cheaper than
/// building the complex constituents when only u is needed (equations of
/// motion, Hamiltonian).
Vec u_values(const Vec& lambda, const CouplingParams& c);

/// Assembles z, u, F and L at a phase point. Empty products (n = 1) are 1.
LaxBundle build_bundle(const PhasePoint& p, const CouplingParams& c);

/// Max-norm of L C L - C, relative to the natural scale max(1, |L|_inf^2).
double group_relation_residual(const LaxBundle& b);

/// Max-norm of the commutation relation
///   e^{i mu} e^{Lambda} L e^{-Lambda} - e^{-i mu} e^{-Lambda} L e^{Lambda}
///     - 2i sin(mu) F F^* - 2i sin(mu - nu) C,
/// relative to the scale of its right-hand side.
double commutation_residual(const LaxBundle& b, const DoubledIndex& d, const CouplingParams& c);

/// The n positive half-log eigenvalues of L, descending: the spectrum of L
/// is { e^{+-2 theta_hat_a} }. Verifies reciprocal pairing to 1e-9 in log
/// scale. Throws SpectrumDegenerate when two theta_hat coincide within
/// 1e-10 or one falls below 1e-10.
Vec lax_spectrum(const LaxBundle& b);

}  // namespace vdlab
