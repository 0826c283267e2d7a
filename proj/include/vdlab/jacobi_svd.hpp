#pragma once

#include "vdlab/types.hpp"

namespace vdlab {

/// One-sided Jacobi SVD, X = U diag(sigma) V^*, singular values descending.
///
/// Column rotations only, so singular values of strongly column-scaled
/// matrices (X = B diag(d) with well-conditioned B) come out with high
/// relative accuracy, which a bidiagonalization-based SVD cannot deliver.
/// This is what makes spectral projection usable at large |t|, where the
/// singular values span many orders of magnitude.
struct JacobiSvd {
    Vec sigma;
    CMat U;
    CMat V;
};

JacobiSvd jacobi_svd(CMat x);

}  // namespace vdlab
