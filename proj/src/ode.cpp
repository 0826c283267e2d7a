#include "vdlab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace vdlab::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool finite(const Vec& v) { return v.allFinite(); }

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double tol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = err[i] / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

double initial_step(const Rhs& f, const Vec& y0, double t0, double dir, double span, double tol) {
    Vec f0(y0.size());
    f(t0, y0, f0);
    const double d0 = y0.cwiseAbs().maxCoeff() + 1.0;
    const double d1 = f0.cwiseAbs().maxCoeff() + 1e-12;
    double h = 0.01 * d0 / d1;
    h = std::min(h, 0.1 * span);
    h = std::max(h, 1e-10 * span);
    (void)tol;
    return dir * h;
}

}  // namespace

void integrate_adaptive(const Rhs& f, const Vec& y0, double t0, double t1, double out_dt,
                        double tol, const Emit& emit, const GuardFn& guard, StepStats& stats) {
    if (t0 == t1) {
        if (emit) emit(t0, y0);
        return;
    }
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    Vec y = y0;
    double t = t0;
    if (emit) emit(t, y);
    long next_emit = 1;
    auto emit_time = [&](long k) { return t0 + dir * out_dt * static_cast<double>(k); };

    double h = initial_step(f, y0, t0, dir, span, tol);
    double facold = 1e-4;
    const Eigen::Index m = y0.size();
    Vec k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), ytmp(m), ynew(m), err(m);

    f(t, y, k1);
    bool warned = false;

    while (dir * (t1 - t) > 1e-14 * std::max(1.0, std::abs(t1))) {
        // clamp to the nearer of: next emission time, final time
        double t_target = t1;
        if (emit && out_dt > 0.0 && next_emit >= 0) {
            const double te = emit_time(next_emit);
            if (dir * (te - t) > 0 && dir * (t1 - te) >= 0) t_target = te;
        }
        if (dir * (t + h - t_target) > 0.0) h = t_target - t;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepFailure("adaptive step size underflow at t = " + std::to_string(t));

        ytmp = y + h * a21 * k1;
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double en;
        if (!finite(ynew) || !finite(err) || !finite(k7))
            en = std::numeric_limits<double>::infinity();
        else
            en = error_norm(err, y, ynew, tol);

        if (en <= 1.0) {
            if (guard) {
                const Guard g = guard(t + h, ynew);
                if (g == Guard::too_close) {
                    if (!warned) {
                        stats.near_collision_warnings += 1;
                        warned = true;
                    }
                    ++stats.rejected;
                    h *= 0.5;
                    continue;
                }
            }
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            ++stats.accepted;
            stats.min_step = std::min(stats.min_step, std::abs(h));
            stats.max_step = std::max(stats.max_step, std::abs(h));
            if (emit && out_dt > 0.0) {
                while (next_emit >= 0) {
                    const double te = emit_time(next_emit);
                    if (dir * (t1 - te) < -1e-12) break;
                    if (std::abs(t - te) <= 1e-12 * std::max(1.0, std::abs(te))) {
                        emit(t, y);
                        ++next_emit;
                        continue;
                    }
                    break;
                }
            }
            const double fac11 = std::isinf(en) ? 10.0 : std::pow(std::max(en, 1e-10), 0.17);
            double fac = fac11 / std::pow(facold, 0.04) / 0.9;
            fac = std::clamp(fac, 0.1, 5.0);
            h /= fac;
            facold = std::max(en, 1e-4);
        } else {
            ++stats.rejected;
            const double fac11 =
                std::isinf(en) ? 10.0 : std::pow(std::min(en, 1e10), 0.2);
            h /= std::min(10.0, fac11 / 0.9);
        }
    }
    if (emit) {
        // final time not on the emission grid
        const double last = emit_time(next_emit - 1);
        if (out_dt <= 0.0 || std::abs(last - t1) > 1e-12 * std::max(1.0, std::abs(t1))) emit(t1, y);
    }
}

Vec integrate_to(const Rhs& f, const Vec& y0, double t0, double t1, double tol,
                 const GuardFn& guard) {
    Vec out = y0;
    StepStats stats;
    integrate_adaptive(
        f, y0, t0, t1, 0.0, tol, [&](double t, const Vec& y) { if (t == t1) out = y; }, guard,
        stats);
    return out;
}

}  // namespace vdlab::ode
