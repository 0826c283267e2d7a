#pragma once

#include <functional>
#include <limits>

#include "vdlab/types.hpp"

namespace vdlab::ode {

struct StepStats {
    long accepted = 0;
    long rejected = 0;
    double min_step = std::numeric_limits<double>::infinity();
    double max_step = 0.0;
    int near_collision_warnings = 0;
};

enum class Guard { ok, too_close };

using Rhs = std::function<void(double t, const Vec& y, Vec& dy)>;
using Emit = std::function<void(double t, const Vec& y)>;
using GuardFn = std::function<Guard(double t, const Vec& y)>;

/// Adaptive embedded Dormand-Prince 5(4) driver with PI step-size control.
///
/// Integrates y' = f(t, y) from t0 to t1 (either direction), calling emit at
/// t0, at every multiple of out_dt from t0, and at t1. Steps are clamped so
/// emission times are hit exactly. The guard runs on every accepted state;
/// Guard::too_close demotes the step to a rejection at half size. tol acts as
/// both absolute and relative tolerance. Throws StepFailure when the
/// controller underflows the step size.
void integrate_adaptive(const Rhs& f, const Vec& y0, double t0, double t1, double out_dt,
                        double tol, const Emit& emit, const GuardFn& guard, StepStats& stats);

/// Single integration to the endpoint without intermediate emission.
Vec integrate_to(const Rhs& f, const Vec& y0, double t0, double t1, double tol,
                 const GuardFn& guard = nullptr);

}  // namespace vdlab::ode
