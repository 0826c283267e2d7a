#pragma once

#include <cstdint>
#include <random>

#include "vdlab/types.hpp"

namespace vdlab {

/// Uniform double in [a, b) from the top 53 bits of the engine output;
/// avoids distribution objects so streams are reproducible bit-for-bit.
inline double uniform(std::mt19937_64& rng, double a, double b) {
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * x;
}

/// Random chamber point: lambda as cumulative sums of gaps in [0.2, 1.2]
/// (stays well inside the chamber), theta uniform in [-2, 2].
inline PhasePoint random_phase_point(std::mt19937_64& rng, Eigen::Index n) {
    PhasePoint p;
    p.lambda.resize(n);
    p.theta.resize(n);
    double acc = 0.0;
    for (Eigen::Index a = n - 1; a >= 0; --a) {
        acc += uniform(rng, 0.2, 1.2);
        p.lambda[a] = acc;
    }
    for (Eigen::Index a = 0; a < n; ++a) p.theta[a] = uniform(rng, -2.0, 2.0);
    return p;
}

/// Couplings resampled until the admissibility margins hold, keeping random
/// points away from near-degenerate spectra.
inline CouplingParams random_couplings(std::mt19937_64& rng) {
    constexpr double margin = 0.05;
    while (true) {
        CouplingParams c(uniform(rng, 0.0, 3.141592653589793), uniform(rng, 0.0, 3.141592653589793));
        if (std::abs(std::sin(c.mu)) > margin && std::abs(std::sin(c.nu)) > margin &&
            std::abs(std::sin(2.0 * c.mu - c.nu)) > margin)
            return c;
    }
}

inline CouplingParams random_couplings_with_kappa(std::mt19937_64& rng) {
    CouplingParams c = random_couplings(rng);
    while (true) {
        const double kappa = uniform(rng, 0.0, 3.141592653589793);
        if (std::abs(std::sin(kappa)) > 0.05) {
            c.kappa = kappa;
            return c;
        }
    }
}

}  // namespace vdlab
