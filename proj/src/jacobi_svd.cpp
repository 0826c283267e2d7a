#include "vdlab/jacobi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vdlab {

JacobiSvd jacobi_svd(CMat x) {
    const Eigen::Index N = x.cols();
    CMat v = CMat::Identity(N, N);

    constexpr double eps = 1e-15;
    constexpr int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < N; ++p) {
            for (Eigen::Index q = p + 1; q < N; ++q) {
                const double app = x.col(p).squaredNorm();
                const double aqq = x.col(q).squaredNorm();
                const Complex apq = x.col(p).dot(x.col(q));  // x_p^* x_q
                const double mag = std::abs(apq);
                if (mag <= eps * std::sqrt(app * aqq)) continue;
                rotated = true;

                // rotation diagonalizing the 2x2 Gram block [[app, apq], [conj(apq), aqq]]
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const Complex ph = apq / mag;

                const CVec xp = x.col(p);
                const CVec xq = x.col(q);
                x.col(p) = cs * xp - sn * std::conj(ph) * xq;
                x.col(q) = sn * ph * xp + cs * xq;
                const CVec vp = v.col(p);
                const CVec vq = v.col(q);
                v.col(p) = cs * vp - sn * std::conj(ph) * vq;
                v.col(q) = sn * ph * vp + cs * vq;
            }
        }
        if (!rotated) break;
    }

    Vec sigma(N);
    for (Eigen::Index k = 0; k < N; ++k) sigma[k] = x.col(k).norm();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return sigma[a] > sigma[b]; });

    JacobiSvd out;
    out.sigma.resize(N);
    out.U.resize(x.rows(), N);
    out.V.resize(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        const Eigen::Index j = order[static_cast<std::size_t>(k)];
        out.sigma[k] = sigma[j];
        if (!(sigma[j] > 0.0) || !std::isfinite(sigma[j]))
            throw EigensolveFailure("Jacobi SVD produced a non-positive singular value");
        out.U.col(k) = x.col(j) / sigma[j];
        out.V.col(k) = v.col(j);
    }
    return out;
}

}  // namespace vdlab
