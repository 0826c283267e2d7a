#include "vdlab/laxcore.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vdlab/hyperbolic.hpp"

namespace vdlab {

Mat involution_matrix(Eigen::Index n) {
    const Eigen::Index N = 2 * n;
    Mat c = Mat::Zero(N, N);
    c.topRightCorner(n, n).setIdentity();
    c.bottomLeftCorner(n, n).setIdentity();
    return c;
}

CMat c_conjugate(const CMat& m) {
    const Eigen::Index n = m.rows() / 2;
    const auto swap = [n](Eigen::Index k) { return k < n ? k + n : k - n; };
    CMat out(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        for (Eigen::Index l = 0; l < m.cols(); ++l) out(k, l) = m(swap(k), swap(l));
    return out;
}

Vec u_values(const Vec& lambda, const CouplingParams& c) {
    const Eigen::Index n = lambda.size();
    const double smu2 = std::sin(c.mu) * std::sin(c.mu);
    const double snu2 = std::sin(c.nu) * std::sin(c.nu);
    Vec u(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        double sh = std::sinh(2.0 * lambda[a]);
        double val = std::sqrt(1.0 + snu2 / (sh * sh));
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            const double sm = std::sinh(lambda[a] - lambda[b]);
            const double sp = std::sinh(lambda[a] + lambda[b]);
            val *= std::sqrt(1.0 + smu2 / (sm * sm));
            val *= std::sqrt(1.0 + smu2 / (sp * sp));
        }
        u[a] = val;
    }
    return u;
}

LaxBundle build_bundle(const PhasePoint& p, const CouplingParams& c) {
    p.validate();
    c.validate();
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const DoubledIndex d = DoubledIndex::from(p);

    LaxBundle b;
    b.z.resize(N);
    b.u.resize(N);
    b.F.resize(N);

    for (Eigen::Index j = 0; j < N; ++j) {
        Complex val = -sinh_ri(2.0 * d.Lambda[j], c.nu) / std::sinh(2.0 * d.Lambda[j]);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == j || k == j - n) continue;
            val *= sinh_ri(d.Lambda[j] - p.lambda[k], c.mu) / std::sinh(d.Lambda[j] - p.lambda[k]);
            val *= sinh_ri(d.Lambda[j] + p.lambda[k], c.mu) / std::sinh(d.Lambda[j] + p.lambda[k]);
        }
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw ValidationError({"degenerate separation encountered while assembling z_" +
                                   std::to_string(j + 1)});
        b.z[j] = val;
        b.u[j] = std::abs(val);
    }

    for (Eigen::Index a = 0; a < n; ++a) {
        const double root_u = std::sqrt(b.u[a]);
        b.F[a] = std::exp(0.5 * p.theta[a]) * root_u;
        b.F[n + a] = std::exp(-0.5 * p.theta[a]) * std::conj(b.z[a]) / root_u;
    }

    const double smu = std::sin(c.mu);
    const double smn = std::sin(c.mu - c.nu);
    const Complex i_smu(0.0, smu);
    const Complex i_smn(0.0, smn);
    b.L.resize(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            Complex num = i_smu * b.F[k] * std::conj(b.F[l]);
            if ((k + n) % N == l % N) num += i_smn;  // C_{kl} = 1 iff |k-l| = n
            b.L(k, l) = num / sinh_ri(d.Lambda[k] - d.Lambda[l], c.mu);
        }
    }
    return b;
}

double group_relation_residual(const LaxBundle& b) {
    const Mat C = involution_matrix(b.n());
    const CMat r = b.L * C * b.L - C;
    const double scale = b.L.cwiseAbs().maxCoeff();
    return r.cwiseAbs().maxCoeff() / std::max(1.0, scale * scale);
}

double commutation_residual(const LaxBundle& b, const DoubledIndex& d, const CouplingParams& c) {
    const Eigen::Index N = b.N();
    const Complex emu = std::polar(1.0, c.mu);
    CMat lhs(N, N), rhs(N, N);
    const Mat C = involution_matrix(b.n());
    const Complex two_i_smu(0.0, 2.0 * std::sin(c.mu));
    const Complex two_i_smn(0.0, 2.0 * std::sin(c.mu - c.nu));
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            const double e = std::exp(d.Lambda[k] - d.Lambda[l]);
            lhs(k, l) = (emu * e - std::conj(emu) / e) * b.L(k, l);
            rhs(k, l) = two_i_smu * b.F[k] * std::conj(b.F[l]) + two_i_smn * C(k, l);
        }
    }
    const double scale = rhs.cwiseAbs().maxCoeff();
    return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, scale);
}

Vec lax_spectrum(const LaxBundle& b) {
    const Eigen::Index n = b.n();
    const Eigen::Index N = b.N();
    Eigen::SelfAdjointEigenSolver<CMat> es(b.L, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigensolveFailure("Lax matrix eigensolve failed");
    const Vec w = es.eigenvalues();  // ascending

    if (w[0] <= 0.0)
        throw SpectrumDegenerate("Lax matrix is not positive definite (min eig = " +
                                 std::to_string(w[0]) + ")");
    for (Eigen::Index k = 0; k < n; ++k) {
        const double pairing = std::abs(std::log(w[k] * w[N - 1 - k]));
        if (pairing > 1e-9)
            throw SpectrumDegenerate("reciprocal eigenvalue pairing violated (log residual = " +
                                     std::to_string(pairing) + ")");
    }

    Vec theta_hat(n);
    for (Eigen::Index a = 0; a < n; ++a) theta_hat[a] = 0.5 * std::log(w[N - 1 - a]);

    for (Eigen::Index a = 0; a + 1 < n; ++a) {
        if (theta_hat[a] - theta_hat[a + 1] < 1e-10)
            throw SpectrumDegenerate("Lax spectrum is not simple: theta_hat_" +
                                     std::to_string(a + 1) + " and theta_hat_" +
                                     std::to_string(a + 2) + " coincide");
    }
    if (theta_hat[n - 1] < 1e-10)
        throw SpectrumDegenerate("theta_hat_" + std::to_string(n) + " vanishes");
    return theta_hat;
}

}  // namespace vdlab
