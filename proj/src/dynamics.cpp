#include "vdlab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "vdlab/hyperbolic.hpp"

namespace vdlab {

double hamiltonian(const PhasePoint& p, const CouplingParams& c) {
    const Vec u = u_values(p.lambda, c);
    double h = 0.0;
    for (Eigen::Index a = 0; a < p.n(); ++a) h += std::cosh(p.theta[a]) * u[a];
    return h;
}

namespace detail {

Mat log_derivative_matrix(const Vec& lambda, const CouplingParams& c) {
    const Eigen::Index n = lambda.size();
    Mat m(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        // diagonal: the external 2-lambda term plus all pair separations
        double s = 2.0 * coupling_kernel(2.0 * lambda[a], c.nu);
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            s += coupling_kernel(lambda[a] - lambda[b], c.mu);
            s += coupling_kernel(lambda[a] + lambda[b], c.mu);
        }
        m(a, a) = -s;
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            m(b, a) = -coupling_kernel(lambda[a] - lambda[b], c.mu) -
                      coupling_kernel(lambda[a] + lambda[b], c.mu);
        }
    }
    return m;
}

}  // namespace detail

Motion equations_of_motion(const PhasePoint& p, const CouplingParams& c) {
    const Eigen::Index n = p.n();
    const Vec u = u_values(p.lambda, c);
    Motion m;
    m.dlambda.resize(n);
    m.dtheta.resize(n);
    for (Eigen::Index a = 0; a < n; ++a) m.dlambda[a] = std::sinh(p.theta[a]) * u[a];
    const Mat dln = detail::log_derivative_matrix(p.lambda, c);
    for (Eigen::Index a = 0; a < n; ++a) {
        double s = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) s += std::cosh(p.theta[b]) * u[b] * dln(b, a);
        m.dtheta[a] = -s;
    }
    return m;
}

BMatrixBundle build_b_bundle(const PhasePoint& p, const CouplingParams& c) {
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const DoubledIndex d = DoubledIndex::from(p);
    const LaxBundle lb = build_bundle(p, c);

    BMatrixBundle bb;
    bb.D.resize(N);
    for (Eigen::Index j = 0; j < N; ++j) bb.D[j] = std::sinh(d.Theta[j]) * lb.u[j];

    const CMat half = 0.5 * (lb.L - c_conjugate(lb.L));
    bb.Y = half;
    bb.Y.diagonal().setZero();

    bb.Z = CMat::Zero(N, N);
    bb.Bperp = CMat::Zero(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            if (k == l) continue;
            const double g = d.Lambda[k] - d.Lambda[l];
            bb.Z(k, l) = bb.Y(k, l) / std::sinh(g);
            bb.Bperp(k, l) = -(std::cosh(g) / std::sinh(g)) * bb.Y(k, l);
        }
    }

    const CVec zf = bb.Z * lb.F;
    bb.Bm = CMat::Zero(N, N);
    for (Eigen::Index a = 0; a < n; ++a) {
        // F_a is real and positive, so i Im((ZF)_a)/F_a stays purely imaginary
        const Complex ma = Complex(0.0, zf[a].imag() / lb.F[a].real());
        bb.Bm(a, a) = ma;
        bb.Bm(n + a, n + a) = ma;
    }
    bb.B = bb.Bm + bb.Bperp;
    return bb;
}

CVec f_log_derivative(const PhasePoint& p, const CouplingParams& c) {
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const DoubledIndex d = DoubledIndex::from(p);
    Vec uN(N);
    {
        const Vec u = u_values(p.lambda, c);
        uN.head(n) = u;
        uN.tail(n) = u;
    }
    CVec phi(N);
    for (Eigen::Index a = 0; a < n; ++a) {
        double v = std::exp(-p.theta[a]) * uN[a] * coupling_kernel(2.0 * p.lambda[a], c.nu);
        for (Eigen::Index j = 0; j < N; ++j) {
            if (j == a || j == n + a) continue;
            v += 0.5 * (std::exp(-p.theta[a]) * uN[a] + std::exp(d.Theta[j]) * uN[j]) *
                 coupling_kernel(p.lambda[a] - d.Lambda[j], c.mu);
        }
        phi[a] = v;
    }
    const Complex i_snu(0.0, std::sin(c.nu));
    const Complex i_smu(0.0, std::sin(c.mu));
    for (Eigen::Index a = 0; a < n; ++a) {
        Complex v = -phi[a];
        v -= 2.0 * i_snu * std::sinh(p.theta[a]) * uN[a] /
             (std::sinh(2.0 * p.lambda[a]) * sinh_ri(-2.0 * p.lambda[a], c.nu));
        for (Eigen::Index j = 0; j < N; ++j) {
            if (j == a || j == n + a) continue;
            v -= i_smu * (std::sinh(p.theta[a]) * uN[a] - std::sinh(d.Theta[j]) * uN[j]) /
                 (std::sinh(p.lambda[a] - d.Lambda[j]) * sinh_ri(d.Lambda[j] - p.lambda[a], c.mu));
        }
        phi[n + a] = v;
    }
    return phi;
}

namespace {

ode::Rhs flow_rhs(const CouplingParams& c, Eigen::Index n) {
    return [c, n](double, const Vec& y, Vec& dy) {
        PhasePoint p(y.head(n), y.tail(n));
        const Motion m = equations_of_motion(p, c);
        dy.resize(2 * n);
        dy.head(n) = m.dlambda;
        dy.tail(n) = m.dtheta;
    };
}

ode::GuardFn chamber_guard(Eigen::Index n) {
    return [n](double t, const Vec& y) {
        double min_sep = 2.0 * y[n - 1];
        for (Eigen::Index a = 0; a + 1 < n; ++a) min_sep = std::min(min_sep, y[a] - y[a + 1]);
        if (min_sep <= 0.0)
            throw DomainExit("flow left the Weyl chamber at t = " + std::to_string(t));
        if (min_sep < 1e-8) return ode::Guard::too_close;
        return ode::Guard::ok;
    };
}

}  // namespace

Trajectory integrate(const PhasePoint& p0, const CouplingParams& c, double t0, double t1,
                     double out_dt, double tol) {
    p0.validate();
    c.validate();
    if (!(tol >= 1e-13 && tol <= 1e-4))
        throw ValidationError({"tol must lie in [1e-13, 1e-4]"});
    if (!(out_dt > 0.0)) throw ValidationError({"out_dt must be positive"});
    if (t0 == t1) throw ValidationError({"empty integration window"});

    const Eigen::Index n = p0.n();
    Vec y0(2 * n);
    y0.head(n) = p0.lambda;
    y0.tail(n) = p0.theta;

    Trajectory traj;
    const auto emit = [&](double t, const Vec& y) {
        PhasePoint p(y.head(n), y.tail(n));
        p.validate();
        traj.times.push_back(t);
        traj.energy.push_back(hamiltonian(p, c));
        traj.theta_hat.push_back(lax_spectrum(build_bundle(p, c)));
        traj.points.push_back(std::move(p));
    };
    ode::integrate_adaptive(flow_rhs(c, n), y0, t0, t1, out_dt, tol, emit, chamber_guard(n),
                            traj.stats);
    return traj;
}

Trajectory integrate_window(const PhasePoint& p0, const CouplingParams& c, double tmin,
                            double tmax, double out_dt, double tol) {
    if (!(tmin <= 0.0 && 0.0 <= tmax) || tmin == tmax)
        throw ValidationError({"window must contain t = 0"});
    if (tmin == 0.0) return integrate(p0, c, 0.0, tmax, out_dt, tol);

    Trajectory bwd = integrate(p0, c, 0.0, tmin, out_dt, tol);
    if (tmax == 0.0) {
        std::reverse(bwd.times.begin(), bwd.times.end());
        std::reverse(bwd.points.begin(), bwd.points.end());
        std::reverse(bwd.energy.begin(), bwd.energy.end());
        std::reverse(bwd.theta_hat.begin(), bwd.theta_hat.end());
        return bwd;
    }
    Trajectory fwd = integrate(p0, c, 0.0, tmax, out_dt, tol);

    Trajectory out;
    out.stats = bwd.stats;
    out.stats.accepted += fwd.stats.accepted;
    out.stats.rejected += fwd.stats.rejected;
    out.stats.min_step = std::min(bwd.stats.min_step, fwd.stats.min_step);
    out.stats.max_step = std::max(bwd.stats.max_step, fwd.stats.max_step);
    out.stats.near_collision_warnings += fwd.stats.near_collision_warnings;
    for (std::size_t i = bwd.size(); i-- > 1;) {  // skip duplicate t = 0
        out.times.push_back(bwd.times[i]);
        out.points.push_back(bwd.points[i]);
        out.energy.push_back(bwd.energy[i]);
        out.theta_hat.push_back(bwd.theta_hat[i]);
    }
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        out.times.push_back(fwd.times[i]);
        out.points.push_back(fwd.points[i]);
        out.energy.push_back(fwd.energy[i]);
        out.theta_hat.push_back(fwd.theta_hat[i]);
    }
    return out;
}

double lax_residual(const PhasePoint& p, const CouplingParams& c, double h) {
    p.validate();
    c.validate();
    if (!(h >= 1e-7 && h <= 1e-3)) throw ValidationError({"h must lie in [1e-7, 1e-3]"});

    const Eigen::Index n = p.n();
    Vec y0(2 * n);
    y0.head(n) = p.lambda;
    y0.tail(n) = p.theta;
    const double tol = std::clamp(h * h * h, 1e-13, 1e-4);
    const auto rhs = flow_rhs(c, n);
    const Vec yp = ode::integrate_to(rhs, y0, 0.0, h, tol);
    const Vec ym = ode::integrate_to(rhs, y0, 0.0, -h, tol);

    const CMat Lp = build_bundle(PhasePoint(yp.head(n), yp.tail(n)), c).L;
    const CMat Lm = build_bundle(PhasePoint(ym.head(n), ym.tail(n)), c).L;
    const CMat dL = (Lp - Lm) / (2.0 * h);

    const LaxBundle lb = build_bundle(p, c);
    const BMatrixBundle bb = build_b_bundle(p, c);
    const CMat comm = lb.L * bb.B - bb.B * lb.L;
    const double scale = comm.cwiseAbs().maxCoeff();
    return (dL - comm).cwiseAbs().maxCoeff() / std::max(1.0, scale);
}

}  // namespace vdlab
