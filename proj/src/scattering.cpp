#include "vdlab/scattering.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "vdlab/laxcore.hpp"

namespace vdlab {

namespace {

/// The positive definite reference matrix whose leading principal minors
/// carry the asymptotic phases: W y^* e^{2 Lambda} y W, with y the unitary
/// Lax eigenbasis ordered by the doubled-spectrum slots and W the
/// block-diagonal flip of the second index block.
CMat asymptotic_reference(const PhasePoint& p, const CouplingParams& c) {
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const LaxBundle lb = build_bundle(p, c);
    (void)lax_spectrum(lb);  // regularity gate: simple, paired spectrum

    Eigen::SelfAdjointEigenSolver<CMat> es(lb.L);
    if (es.info() != Eigen::Success) throw EigensolveFailure("Lax eigensolve failed");

    // slot a (< n) holds e^{2 theta_hat_{a+1}} = ascending index N-1-a,
    // slot n+a holds its reciprocal = ascending index a
    CMat y(N, N);
    for (Eigen::Index a = 0; a < n; ++a) {
        y.col(a) = es.eigenvectors().col(N - 1 - a);
        y.col(n + a) = es.eigenvectors().col(a);
    }

    Vec e2(N);
    const DoubledIndex d = DoubledIndex::from(p);
    for (Eigen::Index k = 0; k < N; ++k) e2[k] = std::exp(2.0 * d.Lambda[k]);
    const CMat lhat = y.adjoint() * e2.asDiagonal() * y;

    // conjugation by W = diag(1_n, flip_n) reverses the second block
    CMat out(N, N);
    const auto w = [n](Eigen::Index k) { return k < n ? k : n + (2 * n - 1 - k); };
    for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l) out(k, l) = lhat(w(k), w(l));
    return out;
}

Vec phases_from_minors(const CMat& ref, Eigen::Index n) {
    Vec lam(n);
    double prev = 1.0;
    for (Eigen::Index a = 1; a <= n; ++a) {
        const Complex det = ref.topLeftCorner(a, a).determinant();
        if (!(det.real() > 0.0) || std::abs(det.imag()) > 1e-9 * std::abs(det))
            throw MinorNonPositive("leading principal minor " + std::to_string(a) +
                                   " is not positive");
        lam[a - 1] = 0.5 * std::log(det.real() / prev);
        prev = det.real();
    }
    return lam;
}

}  // namespace

Vec asymptotic_momenta(const PhasePoint& p, const CouplingParams& c) {
    return 2.0 * lax_spectrum(build_bundle(p, c));
}

Vec asymptotic_phases(const PhasePoint& p, const CouplingParams& c) {
    p.validate();
    c.validate();
    return phases_from_minors(asymptotic_reference(p, c), p.n());
}

ScatteringData scattering_data(const PhasePoint& p, const CouplingParams& c) {
    p.validate();
    c.validate();
    const Eigen::Index n = p.n();
    const Eigen::Index N = 2 * n;
    const CMat ref = asymptotic_reference(p, c);

    ScatteringData sd;
    sd.theta_plus = asymptotic_momenta(p, c);
    sd.theta_minus = -sd.theta_plus;
    sd.lambda_plus = phases_from_minors(ref, n);

    // t -> -infinity: the ordering of the exponential flow reverses, which
    // amounts to reading the minors of the fully index-reversed matrix
    CMat rev(N, N);
    for (Eigen::Index k = 0; k < N; ++k)
        for (Eigen::Index l = 0; l < N; ++l) rev(k, l) = ref(N - 1 - k, N - 1 - l);
    sd.lambda_minus = phases_from_minors(rev, n);
    return sd;
}

TailFit tail_fit(const Trajectory& traj) {
    const std::size_t m = traj.size();
    if (m < 4) throw ValidationError({"trajectory too short for a tail fit"});
    const Eigen::Index n = traj.points.front().n();
    const std::size_t start = m - m / 4;

    TailFit tf;
    tf.slope.resize(n);
    tf.intercept.resize(n);
    const std::size_t cnt = m - start;
    double st = 0.0, stt = 0.0;
    for (std::size_t i = start; i < m; ++i) {
        st += traj.times[i];
        stt += traj.times[i] * traj.times[i];
    }
    const double denom = static_cast<double>(cnt) * stt - st * st;
    for (Eigen::Index a = 0; a < n; ++a) {
        double sy = 0.0, sty = 0.0;
        for (std::size_t i = start; i < m; ++i) {
            sy += traj.points[i].lambda[a];
            sty += traj.times[i] * traj.points[i].lambda[a];
        }
        tf.slope[a] = (static_cast<double>(cnt) * sty - st * sy) / denom;
        tf.intercept[a] = (sy - tf.slope[a] * st) / static_cast<double>(cnt);
    }
    return tf;
}

namespace {

/// Fits log|dev| ~ r*t + b over samples with |dev| above noise floor;
/// returns r (negative means decay in the direction of growing |t|).
double decay_exponent(const std::vector<double>& ts, const std::vector<double>& devs) {
    double st = 0, stt = 0, sy = 0, sty = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double d = std::abs(devs[i]);
        if (d < 1e-14) continue;
        const double y = std::log(d);
        st += ts[i];
        stt += ts[i] * ts[i];
        sy += y;
        sty += ts[i] * y;
        ++cnt;
    }
    if (cnt < 3) return 0.0;
    const double denom = static_cast<double>(cnt) * stt - st * st;
    if (denom == 0.0) return 0.0;
    return (static_cast<double>(cnt) * sty - st * sy) / denom;
}

}  // namespace

AsymptoticsReport verify_asymptotics(const Trajectory& traj, const ScatteringData& sd) {
    if (traj.size() < 8) throw ValidationError({"trajectory too short"});
    if (!(traj.times.front() <= -20.0 && traj.times.back() >= 20.0))
        throw ValidationError({"asymptotics need |t| >= 20 at both trajectory ends"});
    const Eigen::Index n = traj.points.front().n();

    AsymptoticsReport r;
    r.max_deviation_plus = Vec::Zero(n);
    r.max_deviation_minus = Vec::Zero(n);
    r.endpoint_deviation_plus.resize(n);
    r.endpoint_deviation_minus.resize(n);
    r.decay_rate_plus.resize(n);
    r.decay_rate_minus.resize(n);

    const double t_lo = traj.times.front(), t_hi = traj.times.back();
    for (Eigen::Index a = 0; a < n; ++a) {
        std::vector<double> tp, dp, tm, dm;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = traj.times[i];
            const double lam = traj.points[i].lambda[a];
            if (t >= 0.75 * t_hi) {
                const double dev = lam - t * std::sinh(sd.theta_plus[a]) - sd.lambda_plus[a];
                tp.push_back(t);
                dp.push_back(dev);
                r.max_deviation_plus[a] = std::max(r.max_deviation_plus[a], std::abs(dev));
            }
            if (t <= 0.75 * t_lo) {
                const double dev = lam - t * std::sinh(sd.theta_minus[a]) - sd.lambda_minus[a];
                tm.push_back(t);
                dm.push_back(dev);
                r.max_deviation_minus[a] = std::max(r.max_deviation_minus[a], std::abs(dev));
            }
        }
        r.endpoint_deviation_plus[a] = std::abs(
            traj.points.back().lambda[a] - t_hi * std::sinh(sd.theta_plus[a]) - sd.lambda_plus[a]);
        r.endpoint_deviation_minus[a] =
            std::abs(traj.points.front().lambda[a] - t_lo * std::sinh(sd.theta_minus[a]) -
                     sd.lambda_minus[a]);
        r.decay_rate_plus[a] = decay_exponent(tp, dp);
        r.decay_rate_minus[a] = decay_exponent(tm, dm);
    }

    // fit-based estimators over the outer quarters of the window
    Trajectory fwd, bwd;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        fwd.times.push_back(traj.times[i]);
        fwd.points.push_back(traj.points[i]);
        bwd.times.push_back(-traj.times[traj.size() - 1 - i]);
        bwd.points.push_back(traj.points[traj.size() - 1 - i]);
    }
    const TailFit ff = tail_fit(fwd);
    const TailFit fb = tail_fit(bwd);
    r.theta_fit_plus.resize(n);
    r.theta_fit_minus.resize(n);
    r.lambda_fit_plus = ff.intercept;
    r.lambda_fit_minus = fb.intercept;
    for (Eigen::Index a = 0; a < n; ++a) {
        r.theta_fit_plus[a] = std::asinh(ff.slope[a]);
        r.theta_fit_minus[a] = std::asinh(-fb.slope[a]);
    }
    return r;
}

}  // namespace vdlab
