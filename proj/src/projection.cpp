#include "vdlab/projection.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vdlab/dynamics.hpp"
#include "vdlab/jacobi_svd.hpp"
#include "vdlab/laxcore.hpp"
#include "vdlab/ode.hpp"

namespace vdlab {

namespace {

struct ExponentData {
    Vec d;    // eigenvalues of L0 - L0^{-1}, ascending
    CMat q;   // unitary eigenvectors
    Vec Lambda0;
};

ExponentData exponent_data(const PhasePoint& p0, const CouplingParams& c) {
    const LaxBundle lb = build_bundle(p0, c);
    const CMat m = lb.L - c_conjugate(lb.L);
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    if (es.info() != Eigen::Success)
        throw EigensolveFailure("eigensolve of L - L^{-1} failed");
    ExponentData ed;
    ed.d = es.eigenvalues();
    ed.q = es.eigenvectors();
    ed.Lambda0 = DoubledIndex::from(p0).Lambda;
    return ed;
}

}  // namespace

PhasePoint solve_at(const PhasePoint& p0, const CouplingParams& c, double t) {
    p0.validate();
    c.validate();
    const Eigen::Index n = p0.n();
    const Eigen::Index N = 2 * n;
    const ExponentData ed = exponent_data(p0, c);

    // exponent range guard: column norms of X live near e^{Lambda0 + t d/2}
    const double top = ed.Lambda0.cwiseAbs().maxCoeff() +
                       0.5 * std::abs(t) * ed.d.cwiseAbs().maxCoeff();
    if (top > 690.0)
        throw EigensolveFailure("requested time exceeds double-precision exponent range");

    CMat x = ed.q;
    for (Eigen::Index k = 0; k < N; ++k) x.row(k) *= std::exp(ed.Lambda0[k]);
    for (Eigen::Index k = 0; k < N; ++k) x.col(k) *= std::exp(0.5 * t * ed.d[k]);

    const JacobiSvd svd = jacobi_svd(x);

    for (Eigen::Index k = 0; k < n; ++k) {
        const double pairing = 2.0 * std::abs(std::log(svd.sigma[k] * svd.sigma[N - 1 - k]));
        if (pairing > 1e-8)
            throw SpectrumDegenerate(
                "eigenvalues of the geodesic flow failed reciprocal pairing (residual = " +
                std::to_string(pairing) + ")");
    }

    PhasePoint p;
    p.lambda.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) p.lambda[a] = std::log(svd.sigma[a]);

    Vec ldot(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < N; ++k) s += ed.d[k] * std::norm(svd.V(k, a));
        ldot[a] = 0.5 * s;
    }
    const Vec u = u_values(p.lambda, c);
    p.theta.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) p.theta[a] = std::asinh(ldot[a] / u[a]);
    p.validate();
    return p;
}

namespace detail {

GeodesicFrame geodesic_frame(const PhasePoint& p0, const CouplingParams& c, double t1,
                             double tol) {
    const Eigen::Index n = p0.n();
    const Eigen::Index N = 2 * n;

    // state layout: lambda, theta, Re(k), Im(k) flattened column-major
    Vec y0(2 * n + 2 * N * N);
    y0.head(n) = p0.lambda;
    y0.segment(n, n) = p0.theta;
    y0.segment(2 * n, 2 * N * N).setZero();
    for (Eigen::Index k = 0; k < N; ++k) y0[2 * n + k * N + k] = 1.0;

    const auto rhs = [&, n, N](double, const Vec& y, Vec& dy) {
        const PhasePoint p(y.head(n), y.segment(n, n));
        const Motion m = equations_of_motion(p, c);
        const BMatrixBundle bb = build_b_bundle(p, c);
        const CMat kmat = Eigen::Map<const Mat>(y.data() + 2 * n, N, N).cast<Complex>() +
                          Complex(0, 1) * Eigen::Map<const Mat>(y.data() + 2 * n + N * N, N, N)
                                              .cast<Complex>();
        const CMat dk = kmat * (bb.Bm - bb.Z);
        dy.resize(y.size());
        dy.head(n) = m.dlambda;
        dy.segment(n, n) = m.dtheta;
        Eigen::Map<Mat>(dy.data() + 2 * n, N, N) = dk.real();
        Eigen::Map<Mat>(dy.data() + 2 * n + N * N, N, N) = dk.imag();
    };

    const Vec yT = ode::integrate_to(rhs, y0, 0.0, t1, tol);
    GeodesicFrame gf;
    gf.point = PhasePoint(yT.head(n), yT.segment(n, n));
    gf.k = Eigen::Map<const Mat>(yT.data() + 2 * n, N, N).cast<Complex>() +
           Complex(0, 1) * Eigen::Map<const Mat>(yT.data() + 2 * n + N * N, N, N).cast<Complex>();
    return gf;
}

}  // namespace detail

double geodesic_check(const PhasePoint& p0, const CouplingParams& c, double t1, double tol) {
    p0.validate();
    c.validate();
    if (t1 == 0.0) return 0.0;
    const Eigen::Index n = p0.n();
    const Eigen::Index N = 2 * n;
    const ExponentData ed = exponent_data(p0, c);

    Vec y0(2 * n + 2 * N * N);
    y0.head(n) = p0.lambda;
    y0.segment(n, n) = p0.theta;
    y0.segment(2 * n, 2 * N * N).setZero();
    for (Eigen::Index k = 0; k < N; ++k) y0[2 * n + k * N + k] = 1.0;

    const auto rhs = [&, n, N](double, const Vec& y, Vec& dy) {
        const PhasePoint p(y.head(n), y.segment(n, n));
        const Motion m = equations_of_motion(p, c);
        const BMatrixBundle bb = build_b_bundle(p, c);
        const CMat kmat = Eigen::Map<const Mat>(y.data() + 2 * n, N, N).cast<Complex>() +
                          Complex(0, 1) * Eigen::Map<const Mat>(y.data() + 2 * n + N * N, N, N)
                                              .cast<Complex>();
        const CMat dk = kmat * (bb.Bm - bb.Z);
        dy.resize(y.size());
        dy.head(n) = m.dlambda;
        dy.segment(n, n) = m.dtheta;
        Eigen::Map<Mat>(dy.data() + 2 * n, N, N) = dk.real();
        Eigen::Map<Mat>(dy.data() + 2 * n + N * N, N, N) = dk.imag();
    };

    double worst = 0.0;
    const auto emit = [&](double t, const Vec& y) {
        const CMat kmat = Eigen::Map<const Mat>(y.data() + 2 * n, N, N).cast<Complex>() +
                          Complex(0, 1) * Eigen::Map<const Mat>(y.data() + 2 * n + N * N, N, N)
                                              .cast<Complex>();
        Vec e2(N);
        e2.head(n) = (2.0 * y.head(n)).array().exp();
        e2.tail(n) = (-2.0 * y.head(n)).array().exp();
        const CMat lhs = kmat * e2.asDiagonal() * kmat.inverse();

        CMat a = ed.q;
        for (Eigen::Index k = 0; k < N; ++k) a.col(k) *= std::exp(t * ed.d[k]);
        a = a * ed.q.adjoint();
        for (Eigen::Index k = 0; k < N; ++k) {
            a.row(k) *= std::exp(ed.Lambda0[k]);
            a.col(k) *= std::exp(ed.Lambda0[k]);
        }

        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        worst = std::max(worst, (lhs - a).cwiseAbs().maxCoeff() / scale);
    };

    ode::StepStats stats;
    ode::integrate_adaptive(rhs, y0, 0.0, t1, std::abs(t1) / 10.0, tol, emit, nullptr, stats);
    return worst;
}

}  // namespace vdlab
