#pragma once

#include <cmath>
#include <complex>

namespace vdlab {

/// sinh(x + iy) through the real/imaginary decomposition
/// sinh(x)cos(y) + i cosh(x)sin(y).
inline std::complex<double> sinh_ri(double x, double y) {
    return {std::sinh(x) * std::cos(y), std::cosh(x) * std::sin(y)};
}

/// cosh(x + iy) = cosh(x)cos(y) + i sinh(x)sin(y).
inline std::complex<double> cosh_ri(double x, double y) {
    return {std::cosh(x) * std::cos(y), std::sinh(x) * std::sin(y)};
}

/// Re[ i sin(s) / (sinh(x) sinh(is + x)) ], expanded into the manifestly
/// real form sin(s)^2 cosh(x) / (sinh(x) (sinh(x)^2 + sin(s)^2)).
/// Odd in x; the expanded form avoids the complex quotient's cancellation
/// at small separations.
inline double coupling_kernel(double x, double s) {
    const double sh = std::sinh(x);
    const double ss = std::sin(s) * std::sin(s);
    return ss * std::cosh(x) / (sh * (sh * sh + ss));
}

}  // namespace vdlab
